import json
import math
from dataclasses import dataclass

import numpy as np
import pytest

from boundent.serialize import fmt_float, state_from_dict, state_to_dict, to_json
from conftest import random_density


@pytest.mark.parametrize("x,s", [
    (1.0, "1.0"), (0.1, "0.10000000000000001"), (-0.0, "-0.0"), (1e300, "1.0000000000000001e+300"),
    (math.nan, "null"), (math.inf, "null"), (3, "3.0"),
])
def test_fmt_float(x, s):
    assert fmt_float(x) == s


def test_round_trip_exact(rng):
    obj = {"a": [float(x) for x in rng.normal(size=5)], "b": {"c": True, "d": None, "e": "s"}, "f": 3}
    assert json.loads(to_json(obj)) == obj


def test_key_order_preserved():
    text = to_json({"z": 1, "a": 2})
    assert text.index('"z"') < text.index('"a"')


def test_dataclass_with_to_dict():
    @dataclass
    class Thing:
        x: float

        def to_dict(self):
            return {"x": self.x}

    assert json.loads(to_json([Thing(0.5)])) == [{"x": 0.5}]


def test_unknown_type():
    with pytest.raises(TypeError):
        to_json({"x": object()})


def test_state_round_trip(rng):
    rho = random_density(rng)
    back = state_from_dict(json.loads(to_json(state_to_dict(rho))))
    assert np.array_equal(back, rho)


def test_state_size_check():
    with pytest.raises(ValueError):
        state_from_dict({"n_qubits": 2, "entries": [[1, 0]]})
