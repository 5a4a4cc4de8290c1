"""Validate cabench reports and TOML inputs against the shipped JSON Schemas."""
import argparse
import json
import pathlib
import sys

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

import jsonschema
import referencing


def registry(schema_dir: pathlib.Path) -> referencing.Registry:
    resources = []
    for path in schema_dir.glob("*.schema.json"):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], referencing.Resource.from_contents(doc)))
    return referencing.Registry().with_resources(resources)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--schemas", type=pathlib.Path, required=True)
    ap.add_argument("files", nargs="+", type=pathlib.Path)
    args = ap.parse_args()
    reg = registry(args.schemas)
    failures = 0
    for path in args.files:
        if path.suffix == ".toml":
            doc, name = tomllib.loads(path.read_text()), "input"
        else:
            doc = json.loads(path.read_text())
            name = doc["command"]
        schema = reg.contents(f"cabench/{name}.schema.json")
        validator = jsonschema.Draft202012Validator(schema, registry=reg)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        for e in errors[:5]:
            print(f"{path}: {'/'.join(map(str, e.path))}: {e.message}")
        failures += bool(errors)
        if not errors:
            print(f"{path}: valid {name}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
