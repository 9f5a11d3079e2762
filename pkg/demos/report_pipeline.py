"""Drive the report pipeline the way the command line does.

Builds a job config as a plain dict, runs it, and prints the report.
The same dict serialized to JSON works with `python3 -m infostab`.

Run: python3 demos/report_pipeline.py
"""

import json
import pathlib
import tempfile

from infostab.cli import run

config = {
    "schema": 1,
    "job": "certify",
    "theorem": "fundamental_open",
    "alpha": 0.5,
    "resolution": 128,
    "function": {
        "kind": "sum",
        "terms": [
            {"kind": "power_family", "a": 2.0, "b": 1.0, "alpha": 0.5},
            {"kind": "bump", "center": 0.5, "width": 0.2, "height": 1e-4},
        ],
    },
}

out = pathlib.Path(tempfile.mkdtemp(prefix="infostab-demo-"))
code = run(config, out_dir=str(out), dump_defects=True)
report = json.loads((out / "report.json").read_text())

print(f"exit code {code}")
print(f"report at {out / 'report.json'}")
result = report["result"]
print(f"  theorem   {result['theorem']}")
print(f"  epsilon   {result['epsilon']:.6e}")
print(f"  candidate {result['candidate']}")
print(f"  distance  {result['distance']:.6e} <= {result['bound']:.6e}")
print(f"  satisfied {result['satisfied']}")
for name, path in report["files"].items():
    print(f"  {name}: {path}")
