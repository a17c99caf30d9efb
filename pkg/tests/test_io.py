import io
import json
import warnings
from fractions import Fraction

import pytest
from hypothesis import given

from negdep import from_atoms, uniform
from negdep.io import (
    FormatError,
    NormalizationWarning,
    dumps,
    load_graph,
    load_measure,
    measure_from_dict,
    measure_to_dict,
    read_records,
    record,
    save_graph,
    save_measure,
    write_records,
)
from negdep.models import GraphSpec, complete_graph

from conftest import rational_measures


class TestMeasureFiles:
    @given(rational_measures(max_n=4))
    def test_dense_round_trip(self, mu):
        assert measure_from_dict(json.loads(dumps(measure_to_dict(mu)))) == mu

    @given(rational_measures(max_n=4))
    def test_sparse_round_trip(self, mu):
        assert measure_from_dict(json.loads(dumps(measure_to_dict(mu, sparse=True)))) == mu

    def test_file_round_trip(self, tmp_path):
        mu = from_atoms({"100": Fraction(1, 3), "011": Fraction(2, 3)})
        path = tmp_path / "m.json"
        save_measure(mu, path, sparse=True, labels=["a", "b", "c"])
        d = json.loads(path.read_text())
        assert d["atoms"] == [["100", "1/3"], ["011", "2/3"]]
        assert load_measure(path) == mu

    def test_float_backend(self):
        mu = measure_from_dict({"version": 1, "n": 1, "backend": "float", "probs": [0.25, "3/4"]})
        assert not mu.exact and mu.weights[1] == 0.75

    def test_normalization_warning(self):
        with pytest.warns(NormalizationWarning):
            mu = measure_from_dict({"version": 1, "n": 1, "probs": [1, 3]})
        assert mu.weights[1] == Fraction(3, 4)

    def test_exact_input_is_quiet(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            measure_from_dict(measure_to_dict(uniform(2)))

    @pytest.mark.parametrize(
        "d",
        [
            [],
            {"version": 2, "n": 1, "probs": [1, 1]},
            {"version": 1, "kind": "graph", "n": 1, "probs": [1, 1]},
            {"version": 1, "probs": [1, 1]},
            {"version": 1, "n": 1, "probs": [1, 1, 1]},
            {"version": 1, "n": 1, "probs": [1, -1]},
            {"version": 1, "n": 1, "probs": [0, 0]},
            {"version": 1, "n": 1, "probs": [1, True]},
            {"version": 1, "n": 1},
            {"version": 1, "n": 1, "probs": [1, 1], "atoms": []},
            {"version": 1, "n": 2, "atoms": [["1", 1]]},
            {"version": 1, "n": 2, "atoms": [["10", 1], ["10", 1]]},
            {"version": 1, "n": 2, "atoms": [["1x", 1]]},
            {"version": 1, "n": 1, "backend": "decimal", "probs": [1, 1]},
            {"version": 1, "n": 1, "probs": [1, 0], "labels": ["a", "b"]},
        ],
    )
    def test_malformed(self, d):
        with pytest.raises(FormatError):
            measure_from_dict(d)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{")
        with pytest.raises(FormatError):
            load_measure(path)


class TestGraphFiles:
    def test_round_trip(self, tmp_path):
        g = GraphSpec(3, [(0, 1), (1, 2), (0, 2)], weights=[2, 1, Fraction(1, 2)], rates=[1.0, 2.0, 0.5])
        save_graph(g, tmp_path / "g.json")
        h = load_graph(tmp_path / "g.json")
        assert h.edges == g.edges and list(h.weights) == list(g.weights) and list(h.rates) == list(g.rates)

    def test_plain(self, tmp_path):
        save_graph(complete_graph(4), tmp_path / "k4.json")
        assert load_graph(tmp_path / "k4.json").m == 6

    @pytest.mark.parametrize(
        "d",
        [
            {"version": 1, "vertices": 2, "edges": [[0, 0]]},
            {"version": 1, "vertices": 2, "edges": [[0, 5]]},
            {"version": 1, "edges": [[0, 1]]},
            {"version": 1, "vertices": 2, "edges": [[0, 1]], "weights": [1, 2]},
        ],
    )
    def test_malformed(self, tmp_path, d):
        path = tmp_path / "g.json"
        path.write_text(json.dumps(d))
        with pytest.raises(FormatError):
            load_graph(path)


class TestRecords:
    def test_round_trip(self):
        buf = io.StringIO()
        write_records(buf, [record("x", {"a": Fraction(1, 3), "b": float("inf")}), record("y", {})])
        buf.seek(0)
        recs = read_records(buf)
        assert recs[0] == {"version": 1, "kind": "x", "a": "1/3", "b": "inf"}
        assert recs[1]["kind"] == "y"

    def test_canonical(self):
        assert dumps({"b": 1, "a": (1, 2)}) == '{"a":[1,2],"b":1}'
