"""The shipped fixture files stay loadable, canonical and verifiable."""

import json
from pathlib import Path

import pytest

from extdecide.cli import main
from extdecide.decide import brute_force, decide, validate_instance
from extdecide.diffcalc import check_congruence, random_algebra, random_map
from extdecide.abelian import FgAbGroup
from extdecide.fileformat import (
    canonical_json,
    dump_instance,
    dump_operator,
    dump_tower,
    load_instance,
    load_operator,
    load_tower,
)
from extdecide.tower import build_ladder, verify_ladder
import random

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.mark.parametrize(
    "name,dump,load",
    [
        ("operator_mod4.json", dump_operator, load_operator),
        ("tower_small.json", dump_tower, load_tower),
        ("instance_yes.json", dump_instance, load_instance),
        ("instance_no.json", dump_instance, load_instance),
    ],
)
def test_parse_serialize_idempotent(name, dump, load):
    text = (FIXTURES / name).read_text()
    once = canonical_json(dump(load(json.loads(text))))
    assert once == text
    assert canonical_json(dump(load(json.loads(once)))) == once


def test_operator_fixture_checks_clean():
    op = load_operator(json.loads((FIXTURES / "operator_mod4.json").read_text()))
    assert op.terms == ((1, 2), (2, 1))
    rng = random.Random(0)
    for _ in range(20):
        f = random_map(rng, random_algebra(rng), FgAbGroup((4,)))
        assert check_congruence(op, f).ok


def test_tower_fixture_verifies():
    tower = load_tower(json.loads((FIXTURES / "tower_small.json").read_text()))
    assert verify_ladder(tower, build_ladder(tower)).ok


@pytest.mark.parametrize(
    "name,expected", [("instance_yes.json", "YES"), ("instance_no.json", "NO")]
)
def test_instance_fixtures_decide(name, expected):
    inst = load_instance(json.loads((FIXTURES / name).read_text()))
    assert validate_instance(inst).ok
    verdict = decide(inst)
    assert verdict.answer == expected
    assert brute_force(inst).answer == expected


def test_fixtures_through_cli(capsys):
    assert main(["decide", str(FIXTURES / "instance_yes.json"), "--oracle",
                 "--json-only"]) == 0
    capsys.readouterr()
    assert main(["tower", "verify", str(FIXTURES / "tower_small.json"),
                 "--json-only"]) == 0
    capsys.readouterr()
    assert main(["diff", "check", "--operator",
                 str(FIXTURES / "operator_mod4.json"), "--trials", "10",
                 "--json-only"]) == 0
    capsys.readouterr()
