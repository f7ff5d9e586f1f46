"""Validate afc JSON output against the schemas in schema/."""
import json
import subprocess
import sys
from pathlib import Path

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

afc, root = sys.argv[1], Path(sys.argv[2])
schemas = {n: json.loads((root / f"schema/{n}.schema.json").read_text()) for n in ("term", "report", "concrete")}
registry = Registry().with_resources(
    [(s["$id"], Resource.from_contents(s)) for s in schemas.values()]
    + [("term.schema.json", Resource.from_contents(schemas["term"]))]
)

runs = [
    ("report", ["verify", "--order", "2", "--emit-pairing", "--format", "json"]),
    ("report", ["verify", "--order", "2", "--disable", "R5", "--format", "json"]),
    ("report", ["verify", "--order", "1", "--format", "json"]),
    ("term", ["expand", "--side", "lhs", "--order", "2", "--stage", "presplit", "--format", "json"]),
    ("term", ["expand", "--side", "rhs", "--order", "2", "--stage", "normal", "--format", "json"]),
    ("concrete", ["concrete", "--rule", "R8a", "--format", "json"]),
    ("concrete", ["concrete", "--rule", "R9", "--format", "json"]),
]

failed = 0
for name, args in runs:
    out = subprocess.run([afc, *args], capture_output=True, text=True).stdout
    doc = json.loads(out)
    docs = doc if isinstance(doc, list) else [doc]
    v = Draft202012Validator(schemas[name], registry=registry)
    errors = [e for d in docs for e in v.iter_errors(d)]
    print(("ok  " if not errors else "FAIL"), name, " ".join(args))
    for e in errors[:3]:
        print("    ", e.message)
    failed += bool(errors)
sys.exit(1 if failed else 0)
