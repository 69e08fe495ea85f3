"""Python access to the arvol lab. Specs may be dicts, JSON text, or paths to JSON files."""

import json
import os

from . import _arvol
from ._arvol import CapExceeded, ConfigError

__all__ = [
    "CapExceeded",
    "ConfigError",
    "avol",
    "derivative",
    "estimates_ii",
    "fe_bounds",
    "homogeneity",
    "lemma_suite",
    "normalize_spec",
    "okounkov_body",
    "restricted_oracle",
    "restricted_volume",
    "section_count",
    "validate_flag",
    "yuan",
]


def _spec_text(spec):
    if isinstance(spec, dict):
        return json.dumps(spec)
    if isinstance(spec, (str, os.PathLike)) and os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return fh.read()
    return str(spec)


def _wrap(name, takes_spec=True):
    raw = getattr(_arvol, name)

    def call(*args, **kwargs):
        if takes_spec:
            args = (_spec_text(args[0]),) + args[1:]
        return json.loads(raw(*args, **kwargs))

    call.__name__ = name
    call.__doc__ = raw.__doc__
    return call


normalize_spec = _wrap("normalize_spec")
validate_flag = _wrap("validate_flag", takes_spec=False)
section_count = _wrap("section_count")
lemma_suite = _wrap("lemma_suite", takes_spec=False)
avol = _wrap("avol")
restricted_volume = _wrap("restricted_volume")
okounkov_body = _wrap("okounkov_body")
yuan = _wrap("yuan")
derivative = _wrap("derivative")
homogeneity = _wrap("homogeneity")
fe_bounds = _wrap("fe_bounds")
estimates_ii = _wrap("estimates_ii")


def restricted_oracle(spec):
    return _arvol.restricted_oracle(_spec_text(spec))
