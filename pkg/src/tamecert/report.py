"""Canonical JSON serialization for reports and problem files.

Rationals are written as "p/q" strings (plain ints stay ints); dumps are
sorted and fixed-format so identical runs produce byte-identical files.
"""

import json
from fractions import Fraction


def to_jsonable(value):
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"cannot serialise {type(value)!r}")


def fraction_from_json(value):
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and "/" in value:
        num, _, den = value.partition("/")
        return Fraction(int(num), int(den))
    raise ValueError(f"not a rational value: {value!r}")


def vector_from_json(value):
    return tuple(fraction_from_json(x) for x in value)


def int_vector_from_json(value):
    out = []
    for x in value:
        if not isinstance(x, int) or isinstance(x, bool):
            raise ValueError(f"expected an integer, got {x!r}")
        out.append(x)
    return tuple(out)


def matrix_from_json(value):
    return tuple(vector_from_json(row) for row in value)


def int_matrix_from_json(value):
    return tuple(int_vector_from_json(row) for row in value)


def dumps_canonical(data):
    return json.dumps(to_jsonable(data), sort_keys=True, indent=2,
                      separators=(",", ": ")) + "\n"


def write_report(path, data):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(data))


def load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
