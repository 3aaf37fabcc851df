import pytest

from qqmark.ensemble import TargetSet
from qqmark.errors import MalformedStrategyError
from qqmark.protocol import HalfId, OneBit, lpx, swap
from qqmark.strategies import n4_strategy, verify_strategy
from qqmark.tree import Act, Mark, count_ops, depth, dumps, from_dict, loads, to_dict


def test_round_trip_preserves_tree():
    ts = TargetSet.parse("00.00,01.00,10.00,11.01")
    tree = n4_strategy(ts)
    again = loads(dumps(tree))
    assert again == tree
    assert verify_strategy(ts, again).success


def test_json_layout():
    tree = Act(swap(HalfId(0, 1), HalfId(1, 2)), {})
    data = to_dict(tree)
    assert data == {"node": "act", "op": "SWAP", "halves": [[0, 1], [1, 2]], "children": {}}
    leaf = to_dict(Mark((1, 0)))
    assert leaf == {"node": "mark", "hypothesis": [1, 0]}


def test_depth_and_counts():
    tree = Act(lpx(HalfId(0, 1)), {OneBit(0): Mark((0, 1)), OneBit(1): Mark((1, 0))})
    assert depth(tree) == 1
    assert count_ops(tree) == {"LPX": 1}
    assert depth(Mark((0,))) == 0


@pytest.mark.parametrize(
    "data",
    [
        {"node": "leaf"},
        {"node": "act", "op": "LPX", "halves": "bad"},
        {"node": "act", "op": "SWAP", "halves": [[0, 1], [1, 1]], "children": {"0": {"node": "mark", "hypothesis": [0]}}},
        {"node": "act", "op": "LPX", "halves": [[0, 1]], "children": {"2": {"node": "mark", "hypothesis": [0]}}},
    ],
)
def test_malformed_json(data):
    with pytest.raises(MalformedStrategyError):
        from_dict(data)
