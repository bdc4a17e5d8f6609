"""Deterministic JSON rendering."""

import json
import math

import pytest

from mechlab.reportio import render_json, render_number


class TestRenderNumber:
    def test_ints_stay_ints(self):
        assert render_number(42) == "42"

    def test_seventeen_significant_digits(self):
        assert render_number(1e-7) == "9.9999999999999995e-08"
        assert render_number(0.5) == "0.5"
        assert render_number(1.0 / 3.0) == "0.33333333333333331"

    def test_round_trips_doubles_exactly(self):
        import numpy as np

        rng = np.random.default_rng(0)
        for _ in range(500):
            x = float(rng.uniform(-1e6, 1e6)) * 10.0 ** float(rng.integers(-20, 20))
            assert float(render_number(x)) == x

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            render_number(math.inf)


class TestRenderJson:
    def test_preserves_key_order(self):
        obj = {"b": 1, "a": [None, "x", 2.5], "c": {"nested": True}}
        text = render_json(obj)
        assert text.index('"b"') < text.index('"a"') < text.index('"c"')
        assert json.loads(text) == obj

    def test_escapes_strings(self):
        assert render_json({"k": 'quote"and\\slash'}) == '{"k": "quote\\"and\\\\slash"}'

    def test_rejects_non_string_keys(self):
        with pytest.raises(TypeError):
            render_json({1: "x"})

    def test_rejects_unknown_types(self):
        with pytest.raises(TypeError):
            render_json({"k": {1, 2}})
