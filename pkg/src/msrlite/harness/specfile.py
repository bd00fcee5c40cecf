"""JSON code-spec files.

Layout (keys in this order, hex lowercase without a 0x prefix):

    {"version": 1, "n": 6, "k": 3, "t": 1,
     "field": {"w": 16, "poly": "1002d"},
     "lambda": ["0002", ...], "rho": "7923", "seed": 7}
"""
from __future__ import annotations

import json
from pathlib import Path

from ..construction import CodeParams, build_parity_matrix
from ..errors import FormatError, NotMds
from ..field import get_field
from ..mds import verify_mds

VERSION = 1


def dumps(params: CodeParams, seed: int | None = None) -> str:
    digits = params.spec.w // 4
    doc = {
        "version": VERSION,
        "n": params.n,
        "k": params.k,
        "t": params.t,
        "field": {"w": params.spec.w, "poly": f"{params.spec.poly:x}"},
        "lambda": [f"{lam:0{digits}x}" for lam in params.lambdas],
        "rho": None if params.rho is None else f"{params.rho:0{digits}x}",
        "seed": seed,
    }
    return json.dumps(doc, indent=2) + "\n"


def loads(text: str, verify: bool = True) -> tuple[CodeParams, int | None]:
    try:
        doc = json.loads(text)
        if doc.get("version") != VERSION:
            raise FormatError(f"unsupported spec version {doc.get('version')!r}")
        spec = get_field(int(doc["field"]["w"]), int(doc["field"]["poly"], 16))
        rho = doc["rho"]
        params = CodeParams(
            int(doc["n"]), int(doc["k"]), int(doc["t"]),
            tuple(int(x, 16) for x in doc["lambda"]),
            None if rho is None else int(rho, 16),
            spec,
        )
        seed = doc.get("seed")
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise FormatError(f"malformed spec file: {exc}") from exc
    params.validate()
    if verify:
        report = verify_mds(build_parity_matrix(params))
        if not report.is_mds:
            raise NotMds(f"blocks {report.failing_subset} give a rank-deficient submatrix")
    return params, seed


def write_spec(path, params: CodeParams, seed: int | None = None) -> None:
    Path(path).write_text(dumps(params, seed))


def read_spec(path, verify: bool = True) -> tuple[CodeParams, int | None]:
    return loads(Path(path).read_text(), verify=verify)
