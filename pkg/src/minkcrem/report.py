"""Plain-dict renderings of results, matching the shipped JSON schema."""

from __future__ import annotations

import json
from importlib import resources

from .arith import INFINITY, FactoredNat
from .bounds import NOT_SMALL, BoundReport, PrimeBound

SCHEMA_VERSION = "1"


def load_schema() -> dict:
    return json.loads(resources.files("minkcrem").joinpath("schema/report.schema.json").read_text())


def ext(value):
    return "inf" if value is INFINITY else value


def factored(value: FactoredNat) -> dict:
    out = {"factored": str(value), "decimal": str(value.value())}
    if not value.certified:
        out["certified"] = False
    return out


def prime_bound_dict(pb: PrimeBound | None, ell: int | None = None) -> dict:
    """One perPrime entry; ``None`` stands for an untabulated prime with t > 6."""
    if pb is None:
        return {"ell": ell, "t": None, "m": None, "M": 0, "branch": "largeT:0"}
    return {"ell": pb.ell, "t": pb.inv.t, "m": ext(pb.inv.m), "M": ext(pb.M), "branch": pb.branch}


def bound_dict(report: BoundReport, only: list | None = None) -> dict:
    """``only``: explicit perPrime entries to show instead of the report's own."""
    per = only if only is not None else [prime_bound_dict(pb) for pb in report.per_prime]
    glob = NOT_SMALL if report.global_ == NOT_SMALL else factored(report.global_)
    return {"field": str(report.field), "perPrime": per, "global": glob}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)
