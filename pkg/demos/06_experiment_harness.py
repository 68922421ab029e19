"""Config-driven experiment runs with manifests and deterministic outputs.

Builds a small sweep config, validates it, runs it twice to show the
refuse/overwrite behaviour, and verifies that the rerun is byte-identical.
The same config works through the CLI:

    specdiff validate --config /tmp/specdiff_demo/config.json
    specdiff alpha    --config /tmp/specdiff_demo/config.json --overwrite

Run:

    python3 demos/06_experiment_harness.py
"""

import json
import pathlib

from specdiff import ExperimentConfig, run, validate
from specdiff.harness import ConfigError


def main():
    base = pathlib.Path("/tmp/specdiff_demo")
    base.mkdir(exist_ok=True)
    doc = {
        "kind": "alpha_sweep",
        "model": {"kind": "lattice1d", "n_half": 50,
                  "potential": [[0, 0.5]], "decay_rate": None, "seed": 0},
        "lambda_grid": {"min": -1.0, "max": 1.0, "count": 9},
        "output_dir": str(base / "out"),
    }
    (base / "config.json").write_text(json.dumps(doc, indent=2))
    cfg = ExperimentConfig.from_file(str(base / "config.json"))
    print("diagnostics:", validate(cfg) or "none")
    print("config hash:", cfg.config_hash()[:16], "...")

    record = run(cfg, overwrite=True)
    print("status:", record.status)
    first = (base / "out" / "alpha_sweep.csv").read_bytes()
    try:
        run(cfg)
    except ConfigError as exc:
        print("second run refused as expected:", exc)
    run(cfg, overwrite=True)
    same = (base / "out" / "alpha_sweep.csv").read_bytes() == first
    print("rerun byte-identical:", same)
    manifest = json.loads((base / "out" / "manifest.json").read_text())
    print("manifest files:", sorted(manifest["files"]))


if __name__ == "__main__":
    main()
