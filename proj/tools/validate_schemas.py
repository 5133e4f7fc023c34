"""Runs each JSON-emitting astopo command on a small generated graph and
validates the report against schemas/<command>.schema.json."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def run(exe, *args):
    out = subprocess.run([exe, *args], check=True, capture_output=True, text=True).stdout
    return json.loads(out)


def main():
    exe, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    with tempfile.TemporaryDirectory() as tmp:
        g = str(pathlib.Path(tmp) / "g.txt")
        reports = {
            "generate": run(exe, "generate", "--n", "1500", "--seed", "4", "--radius", "12.5",
                            "--calibrate-clique", "5", "--out", g),
            "metrics": run(exe, "metrics", g),
            "spider": run(exe, "spider", g, "--max-pairs", "20"),
            "overlap": run(exe, "overlap", g, "--samples", "2000", "--seed", "2"),
            "peering": run(exe, "peering", g),
            "game_enumerate": run(exe, "game", "enumerate", "--n", "3", "--phi-p", "0.5", "--phi-r", "0.1"),
            "bounds": run(exe, "bounds", "--phi-p", "0.5", "--phi-r", "0.1", "--n", "50", "--clique-size", "4"),
            "estimate_phis": run(exe, "estimate-phis", g),
        }
    failed = 0
    for name, report in reports.items():
        schema = json.loads((schema_dir / f"{name}.schema.json").read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        errors = list(jsonschema.Draft202012Validator(schema).iter_errors(report))
        for e in errors:
            print(f"{name}: {'/'.join(map(str, e.absolute_path))}: {e.message}")
        print(f"{name}: {'ok' if not errors else 'INVALID'}")
        failed += bool(errors)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
