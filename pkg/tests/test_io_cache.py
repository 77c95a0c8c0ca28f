import json

import numpy as np
import pytest

from drinfeld.cache import CACHE_VERSION, TableCache
from drinfeld.chartable import character_table
from drinfeld.double import DrinfeldDouble
from drinfeld.group import build_group
from drinfeld.io import (
    chartable_to_json,
    dumps,
    fusion_from_json,
    fusion_to_csv,
    fusion_to_json,
    load_fusion,
    smatrix_to_json,
)
from drinfeld.rings import ring_from_double, verify_ring_axioms


def test_cold_and_warm_doubles_agree(tmp_path):
    cache = TableCache(tmp_path)
    G = build_group("dicyclic:3")
    cold = DrinfeldDouble(G, cache=cache)
    S_cold = cold.s_matrix().numer
    misses, hits = cache.misses, cache.hits
    assert misses > 0
    warm = DrinfeldDouble(build_group("dicyclic:3"), cache=cache)
    assert np.array_equal(warm.s_matrix().numer, S_cold)
    assert cache.misses == misses and cache.hits == hits + len(warm.classes)
    assert np.array_equal(warm.verlinde().coeffs, cold.verlinde().coeffs)


def test_cache_key_depends_on_table_and_version(tmp_path):
    cache = TableCache(tmp_path)
    a = build_group("dihedral:4").mult
    b = build_group("dicyclic:2").mult
    assert cache.key("chartable", a) != cache.key("chartable", b)
    assert cache.key("chartable", a) == cache.key("chartable", a.copy())
    assert CACHE_VERSION


def test_corrupt_cache_entry_is_a_miss(tmp_path):
    cache = TableCache(tmp_path)
    G = build_group("dihedral:3")
    T = character_table(G, cache=cache)
    for f in tmp_path.iterdir():
        f.write_text("{not json")
    again = character_table(G, cache=cache)
    assert again.values == T.values


def test_fusion_json_roundtrip(tmp_path):
    R = ring_from_double("dihedral:4")
    text = dumps(fusion_to_json(R, "D8"))
    path = tmp_path / "d8.json"
    path.write_text(text)
    back = load_fusion(path)
    assert np.array_equal(back.N, R.N)
    assert back.labels == R.labels and list(back.dims) == list(R.dims)
    assert list(back.dual) == list(R.dual)
    assert verify_ring_axioms(back).ok
    assert dumps(fusion_to_json(back, "D8")) == text


def test_fusion_from_json_rejects_garbage():
    with pytest.raises((ValueError, KeyError)):
        fusion_from_json({"rank": 2, "triples": [[0, 0, 5, 1]]})


def test_smatrix_json_is_exact():
    from drinfeld.double import s_matrix
    from drinfeld.cyclotomic import CycNum

    S = s_matrix("dihedral:3")
    data = json.loads(dumps(smatrix_to_json(S, "D6")))
    entries = [[CycNum.from_json(z) for z in row] for row in data["entries"]]
    assert entries == [list(r) for r in S.entries]
    assert data["labels"][0] == "V_{1,1}"


def test_csv_rows():
    R = ring_from_double("cyclic:2")
    lines = fusion_to_csv(R).strip().splitlines()
    assert lines[0] == "a,b,product"
    assert len(lines) == 1 + 16


def test_chartable_json():
    T = character_table(build_group("dicyclic:2"))
    data = chartable_to_json(T)
    assert json.loads(dumps(data)) == data
