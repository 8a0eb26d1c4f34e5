"""Python front end of the quatperiod library.

``run(command, **options)`` accepts the same options as the command-line tool
(``labels`` as a list, ``T`` as ``[n1, m2, n2]``) and returns the parsed report.
"""

import json
from pathlib import Path

from ._core import (
    InvariantError,
    admissible_discriminants,
    convention_version,
    eichler_mass,
    run_json,
    schema_version,
)

__all__ = [
    "InvariantError",
    "admissible_discriminants",
    "convention_version",
    "eichler_mass",
    "run",
    "schema_version",
]

_BUNDLED_NEWFORMS = Path(__file__).with_name("newforms.txt")


def run(command, **options):
    config = {"command": command, **options}
    if "newforms" not in config and _BUNDLED_NEWFORMS.exists():
        config["newforms"] = str(_BUNDLED_NEWFORMS)
    if isinstance(config.get("labels"), str):
        config["labels"] = [s.strip() for s in config["labels"].split(",") if s.strip()]
    return json.loads(run_json(json.dumps(config)))
