"""Net and semilinear set text formats."""
from __future__ import annotations

import random

import pytest

from pnhs.formats import (
    ParseError,
    format_net,
    format_semilinear,
    parse_net,
    parse_semilinear,
)
from pnhs.semilinear import LinearSet, SemilinearSet
from util import random_net, random_semilinear


def test_parse_simple_net():
    net = parse_net("dim 2\naction t : 1 0 -> 0 1\n")
    assert net.dim == 2
    assert len(net.actions) == 1
    assert net.actions[0].pre == (1, 0)
    assert net.actions[0].post == (0, 1)
    assert net.actions[0].name == "t"


def test_parse_net_comments_and_blanks():
    text = """
    # a mover
    dim 2

    action t : 1 0 -> 0 1  # move
    """
    net = parse_net(text)
    assert len(net.actions) == 1


def test_parse_net_wrong_arity():
    with pytest.raises(ParseError) as e:
        parse_net("dim 2\naction t : 1 -> 0 1\n")
    assert e.value.line == 2


def test_parse_net_negative_entry():
    with pytest.raises(ParseError) as e:
        parse_net("dim 1\naction t : -1 -> 0\n")
    assert "natural" in e.value.message


def test_parse_net_duplicate_action():
    with pytest.raises(ParseError) as e:
        parse_net("dim 1\naction t : 1 -> 0\naction t : 0 -> 1\n")
    assert e.value.line == 3


def test_parse_net_missing_dim():
    with pytest.raises(ParseError):
        parse_net("action t : 1 -> 0\n")


def test_parse_net_position_reported():
    with pytest.raises(ParseError) as e:
        parse_net("dim 2\naction t : 1 x -> 0 1\n")
    assert e.value.line == 2
    assert e.value.column == 14


def test_net_roundtrip():
    net = parse_net("dim 3\naction a : 1 0 2 -> 0 1 0\naction b : 0 0 0 -> 1 1 1\n")
    assert parse_net(format_net(net)) == net


def test_parse_semilinear_basic():
    s = parse_semilinear("linear base 1 0 periods ( 1 1 ) ( 0 1 )\nlinear base 0 0\n")
    assert s == SemilinearSet(
        (LinearSet((1, 0), ((1, 1), (0, 1))), LinearSet((0, 0)))
    )


def test_parse_semilinear_empty_file():
    s = parse_semilinear("")
    assert s.is_empty()
    assert parse_semilinear("# nothing here\n\n").is_empty()


def test_parse_semilinear_dimension_consistency():
    with pytest.raises(ParseError):
        parse_semilinear("linear base 1 0\nlinear base 1 2 3\n")


def test_parse_semilinear_bad_parens():
    with pytest.raises(ParseError):
        parse_semilinear("linear base 1 0 periods ( 1 )\n")


def test_semilinear_roundtrip_normalizes():
    s = parse_semilinear("linear base 2 2 periods ( 0 0 ) ( 1 0 ) ( 1 0 )\n")
    # zero and duplicate periods vanish
    assert s.components[0].periods == ((1, 0),)
    assert parse_semilinear(format_semilinear(s)) == s


def test_format_semilinear_empty_is_empty_file():
    assert format_semilinear(SemilinearSet(())) == ""


def test_roundtrip_random():
    rng = random.Random(3)
    for _ in range(100):
        net = random_net(rng)
        assert parse_net(format_net(net)) == net
        s = random_semilinear(rng, rng.randint(1, 3))
        assert parse_semilinear(format_semilinear(s)) == s
