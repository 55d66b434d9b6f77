import json
from pathlib import Path

import pytest

from conftest import RINGS, RING_IDS
from hexact.bounded import NEGATIVE, POSITIVE, UNBOUNDED, interval
from hexact.exactness import classify_exactness
from hexact.generators import SEQUENCE_MODES, random_sequence
from hexact.rings import QQ, ZZ
from hexact.serialize import InstanceError, dumps, instance_of, load, loads

DATA = Path(__file__).parent / "data"


def doc(**sections) -> str:
    base = {"ring": "Z", "complexes": {"A": {"modules": {"0": 1, "1": 1}, "differentials": {"1": [[2]]}}}}
    base.update(sections)
    return json.dumps(base)


def problems(text: str) -> list[tuple[str, str]]:
    with pytest.raises(InstanceError) as ei:
        loads(text, "t.json")
    return ei.value.problems


def only(text: str) -> tuple[str, str]:
    ps = problems(text)
    assert len(ps) == 1, ps
    return ps[0]


class TestRoundTrip:
    @pytest.mark.parametrize("R", RINGS, ids=RING_IDS)
    @pytest.mark.parametrize("variant", [UNBOUNDED, POSITIVE, NEGATIVE, interval(2)], ids=str)
    def test_random_instances(self, R, variant, rng):
        seqs = {f"S{i}": random_sequence(R, rng, variant, m).sequence for i, m in enumerate(SEQUENCE_MODES)}
        inst = instance_of(R, seqs, None if variant == UNBOUNDED else variant)
        text = dumps(inst)
        back = loads(text)
        assert back.same_as(inst)
        assert dumps(back) == text

    def test_templates_survive(self):
        inst = load(str(DATA / "ex.json"))
        back = loads(dumps(inst))
        assert back.sequence_specs["S"] == {"cofibre": "f"} and back.sequence_specs["K"] == {"fibre": "f"}
        assert back.same_as(inst)
        assert classify_exactness(back.sequences["T"]).vector() == classify_exactness(inst.sequences["T"]).vector()

    def test_rational_entries(self):
        text = json.dumps({"ring": "Q", "complexes": {"A": {"modules": {"0": 1, "1": 1}, "differentials": {"1": [["-3/4"]]}}}})
        inst = loads(text)
        assert inst.complexes["A"].d(1).tolist() == [[QQ(-3) / 4]]
        assert '"-3/4"' in dumps(inst)

    def test_torsion_module(self):
        text = json.dumps({"complexes": {"M": {"modules": {"0": {"gens": 2, "relations": [[2], [0]]}}}}})
        M = loads(text).complexes["M"].module(0)
        assert M.describe() == "Z + Z/2"
        assert loads(dumps(loads(text))).complexes["M"] == loads(text).complexes["M"]

    def test_gens_without_relations_is_free(self):
        inst = loads(json.dumps({"complexes": {"F": {"modules": {"0": {"gens": 2}}}}}))
        assert inst.complexes["F"].module(0).is_free_presentation


class TestErrors:
    def test_invalid_json_reports_line_and_column(self):
        loc, msg = only('{\n  "ring": "Z",\n  oops\n}')
        assert loc == "3:3" and msg.startswith("invalid JSON")

    def test_message_format(self):
        with pytest.raises(InstanceError) as ei:
            loads(doc(maps={"f": {"source": "A", "target": "nope"}}), "t.json")
        assert str(ei.value) == "t.json:/maps/f/target: unresolved complex 'nope'"

    def test_missing_file(self):
        with pytest.raises(InstanceError, match="cannot read file"):
            load(str(DATA / "missing.json"))

    def test_top_level(self):
        assert only("[1, 2]") == ("/", "top level must be a JSON object")
        assert only(doc(extra=1)) == ("/extra", "unknown top-level key")
        assert only(doc(maps=[1])) == ("/maps", "expected an object keyed by name")

    @pytest.mark.parametrize("ring", ["R", {"Zp": 4}, {"Zp": 5, "x": 1}])
    def test_bad_ring(self, ring):
        assert only(json.dumps({"ring": ring}))[0] == "/ring"

    def test_bad_variant(self):
        assert only(doc(variant="interval:0"))[0] == "/variant"

    def test_complex_outside_variant(self):
        loc, msg = only(doc(variant="negative"))
        assert loc == "/complexes/A" and "outside the negative variant" in msg

    @pytest.mark.parametrize("modules, loc", [
        ({"0": -1}, "/complexes/C/modules/0"),
        ({"x": 1}, "/complexes/C/modules/x"),
        ({"0": "two"}, "/complexes/C/modules/0"),
        ({"0": {"gens": -2}}, "/complexes/C/modules/0/gens"),
        ({"0": {"gens": 1, "relations": [[1], [2]]}}, "/complexes/C/modules/0/relations"),
    ])
    def test_bad_modules(self, modules, loc):
        assert only(json.dumps({"complexes": {"C": {"modules": modules}}}))[0] == loc

    def test_bad_matrix_shape(self):
        text = json.dumps({"complexes": {"C": {"modules": {"0": 1, "1": 2}, "differentials": {"1": [[1, 2, 3]]}}}})
        assert only(text) == ("/complexes/C/differentials/1/0", "expected 2 columns, got 3")
        text = json.dumps({"complexes": {"C": {"modules": {"0": 2, "1": 1}, "differentials": {"1": [[1]]}}}})
        assert only(text) == ("/complexes/C/differentials/1", "expected 2 rows, got 1")

    @pytest.mark.parametrize("entry", [1.5, True, None, "x"])
    def test_bad_entry(self, entry):
        text = json.dumps({"complexes": {"C": {"modules": {"0": 1, "1": 1}, "differentials": {"1": [[entry]]}}}})
        assert only(text)[0] == "/complexes/C/differentials/1/0/0"

    def test_fraction_over_Z_rejected(self):
        text = json.dumps({"complexes": {"C": {"modules": {"0": 1, "1": 1}, "differentials": {"1": [["1/2"]]}}}})
        assert only(text)[0] == "/complexes/C/differentials/1/0/0"

    def test_dd_nonzero(self):
        text = json.dumps({"complexes": {"C": {"modules": {"0": 1, "1": 1, "2": 1},
                                               "differentials": {"1": [[1]], "2": [[1]]}}}})
        loc, _ = only(text)
        assert loc.startswith("/complexes/C/differentials/")

    def test_unresolved_map_complex(self):
        assert only(doc(maps={"f": {"source": "Q", "target": "A"}})) == ("/maps/f/source", "unresolved complex 'Q'")

    def test_missing_field(self):
        assert only(doc(maps={"f": {"source": "A"}})) == ("/maps/f", "missing field 'target'")

    @pytest.mark.parametrize("name", ["g.f", "0", "1", "id"])
    def test_reserved_map_names(self, name):
        assert only(doc(maps={name: {"source": "A", "target": "A"}}))[0] == f"/maps/{name}"

    def test_ill_defined_map(self):
        # a map A -> A that is not a chain map: d f != f d
        loc, _ = only(doc(maps={"f": {"source": "A", "target": "A", "components": {"0": [[1]]}}}))
        assert loc.startswith("/maps/f/components/")

    def test_map_into_torsion_not_well_defined(self):
        text = json.dumps({"complexes": {"Z": {"modules": {"0": 1}}, "T": {"modules": {"0": {"gens": 1, "relations": [[2]]}}}},
                           "maps": {"f": {"source": "T", "target": "Z", "components": {"0": [[1]]}}}})
        assert only(text)[0] == "/maps/f/components/0"

    def test_homotopy_errors(self):
        maps = {"f": {"source": "A", "target": "A", "components": {"0": [[1]], "1": [[1]]}}}
        assert only(doc(maps=maps, homotopies={"h": {"source": "A", "target": "A", "start": "0", "end": "g"}})) == \
            ("/homotopies/h/end", "unresolved map 'g'")
        assert only(doc(maps=maps, homotopies={"h": {"source": "A", "target": "A", "start": 3, "end": "f"}}))[0] == \
            "/homotopies/h/start"
        ps = problems(doc(maps=maps, homotopies={"h": {"source": "A", "target": "A", "start": "0", "end": "f"}}))
        assert [p[0] for p in ps] == ["/homotopies/h/components/0", "/homotopies/h/components/1"]

    def test_endpoint_between_wrong_complexes(self):
        complexes = {"A": {"modules": {"0": 1}}, "B": {"modules": {"0": 2}}}
        text = json.dumps({"complexes": complexes,
                           "maps": {"f": {"source": "A", "target": "B", "components": {"0": [[1], [0]]}}},
                           "homotopies": {"h": {"source": "B", "target": "A", "start": "0", "end": "f"}}})
        loc, msg = only(text)
        assert loc == "/homotopies/h/end" and "does not run between" in msg

    def test_sequence_errors(self):
        maps = {"f": {"source": "A", "target": "A", "components": {"0": [[1]], "1": [[1]]}}}
        homs = {"h": {"source": "A", "target": "A", "start": "0", "end": "f.f", "components": {}}}
        assert only(doc(maps=maps, sequences={"S": {"cofibre": "nope"}})) == ("/sequences/S/cofibre", "unresolved map 'nope'")
        assert only(doc(maps=maps, sequences={"S": {"f": "f", "g": "f"}})) == ("/sequences/S", "missing field 'alpha'")
        assert only(doc(maps=maps, sequences={"S": {"f": "f", "g": "f", "alpha": "k"}})) == \
            ("/sequences/S/alpha", "unresolved homotopy 'k'")
        # f.f = 1 is not null-homotopic on A: the fault is reported at h, not at the sequence using it
        ps = problems(doc(maps=maps, homotopies=homs, sequences={"S": {"f": "f", "g": "f", "alpha": "h"}}))
        assert ps and all(p[0].startswith("/homotopies/h/components/") for p in ps)
        homs = {"h": {"source": "A", "target": "A", "start": "0", "end": "0"}}
        assert only(doc(maps=maps, homotopies=homs, sequences={"S": {"f": "f", "g": "f", "alpha": "h"}})) == \
            ("/sequences/S/alpha", "alpha must end at g.f")

    def test_all_problems_collected(self):
        text = json.dumps({"complexes": {"A": {"modules": {"0": -1}}, "B": {"modules": {"x": 1}}}, "bogus": 0})
        assert [p[0] for p in problems(text)] == ["/bogus", "/complexes/A/modules/0", "/complexes/B/modules/x"]

    def test_corpus_broken(self):
        with pytest.raises(InstanceError) as ei:
            load(str(DATA / "broken.json"))
        (loc, msg), = ei.value.problems
        assert (loc, msg) == ("/complexes/B/differentials/2", "dd: d_1 d_2 = [[1]] is not zero")


def test_ring_default_is_Z():
    assert loads(json.dumps({"complexes": {}})).ring == ZZ
