from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from holwfs.domains import (
    FALSE, TRUE, UNDEF, DomainSpace, Flavor, Truth, ValuePair, default_cap, preceq_values,
)
from holwfs.errors import CapExceeded, NotChain
from holwfs.syntax import parse_type

O, OO, IO = parse_type("o"), parse_type("o->o"), parse_type("i->o")
SMALL_TYPES = ["o", "o->o", "i->o", "o->o->o", "(i->o)->o", "i->o->o", "(o->o)->o"]


@pytest.fixture
def two():
    return DomainSpace(["a", "b"])


def test_truth_values():
    assert [str(v) for v in (FALSE, UNDEF, TRUE)] == ["false", "undef", "true"]
    assert Truth.parse("Undef") is UNDEF


def test_counts_at_o_to_o(two):
    assert len(two.handle(OO)) == 11
    assert len(brute.three(OO, 2)) == 11
    assert [len(two.handle(OO, f)) for f in ("ma", "am", "pair")] == [5, 5, 11]


def test_unary_over_two_individuals(two):
    assert len(two.handle(IO)) == 9
    assert len(two.handle(IO, Flavor.PAIR)) == 9


@pytest.mark.parametrize("text", SMALL_TYPES)
@pytest.mark.parametrize("n", [1, 2])
def test_enumeration_matches_brute_force(text, n):
    t = parse_type(text)
    space = DomainSpace([f"c{i}" for i in range(n)])
    assert tuple(space.handle(t).elements) == brute.three(t, n)
    assert tuple(space.handle(t, "ma").elements) == brute.two(t, n, "ma")
    assert tuple(space.handle(t, "am").elements) == brute.two(t, n, "am")
    assert tuple(tuple(p) for p in space.handle(t, "pair").elements) == brute.pairs(t, n)


@pytest.mark.parametrize("text", SMALL_TYPES)
def test_three_valued_and_pair_domains_have_equal_size(text):
    t = parse_type(text)
    space = DomainSpace(["a", "b"])
    assert len(space.handle(t)) == len(space.handle(t, "pair"))


def test_order_masks_match_definitions(two):
    for t in (OO, IO, parse_type("(o->o)->o")):
        h = two.handle(t)
        up_leq, up_pre = h.up("leq"), h.up("preceq")
        for i, x in enumerate(h.elements):
            for j, y in enumerate(h.elements):
                assert bool(up_leq[i] >> j & 1) == brute.truth_le(x, y)
                assert bool(up_pre[i] >> j & 1) == brute.info_le(x, y)
        p = two.handle(t, "pair")
        up_pre = p.up("preceq")
        down = p.down("preceq")
        for i, x in enumerate(p.elements):
            for j, y in enumerate(p.elements):
                assert bool(up_pre[i] >> j & 1) == brute.pair_info_le(x, y)
                assert bool(down[j] >> i & 1) == brute.pair_info_le(x, y)


def test_bottom_and_top(two):
    assert two.bottom(OO) == (FALSE,) * 3
    assert two.bottom(OO, order="preceq") == (UNDEF,) * 3
    assert two.top(OO) == (TRUE,) * 3
    assert two.bottom(OO, "ma") == two.bottom(OO, "am")
    assert two.top(OO, "ma") == two.top(OO, "am")
    assert two.bottom(OO, "pair", "preceq") == ValuePair((FALSE,) * 3, (TRUE,) * 3)
    assert two.bottom(O) == FALSE and two.top(O) == TRUE
    assert two.bottom(parse_type("(o->o)->o"), order="preceq") == (UNDEF,) * 11
    with pytest.raises(ValueError):
        two.top(OO, order="preceq")


def test_lub_glb(two):
    f = (FALSE, UNDEF, TRUE)
    g = (TRUE, UNDEF, FALSE)
    assert two.lub([f, g], OO) == (TRUE, UNDEF, TRUE)
    assert two.glb([f, g], OO) == (FALSE, UNDEF, FALSE)
    assert two.lub([(UNDEF,) * 3, f], OO, order="preceq") == f
    with pytest.raises(NotChain):
        two.lub([f, g], OO, order="preceq")


def test_leq_rejects_shape_mismatch(two):
    with pytest.raises(TypeError):
        two.leq((FALSE,), (TRUE,), OO)
    with pytest.raises(TypeError):
        two.leq(UNDEF, TRUE, O, "ma")


def test_validate(two):
    assert two.validate((FALSE, UNDEF, TRUE), OO)
    assert not two.validate((FALSE, TRUE, TRUE), OO)  # undef maps above false
    assert not two.validate((FALSE, UNDEF), OO)
    assert not two.validate((FALSE, TRUE, FALSE), OO, "ma")  # (f,t) is below (f,f)
    assert two.validate((FALSE, TRUE, FALSE), OO, "am")
    assert two.validate(ValuePair((FALSE, FALSE, TRUE), (TRUE, FALSE, TRUE)), OO, "pair") is False
    assert all(two.validate(v, OO, "pair") for v in two.handle(OO, "pair"))
    assert not two.validate(5, parse_type("i"))


def test_validate_agrees_with_enumeration(two):
    from itertools import product

    for t in (OO, IO):
        members = set(two.handle(t).elements)
        for cand in product((FALSE, UNDEF, TRUE), repeat=len(two.key_handle(t, Flavor.THREE))):
            assert two.validate(cand, t) == (cand in members)


def test_cap_is_enforced():
    space = DomainSpace(["c0"], cap=100)
    with pytest.raises(CapExceeded) as info:
        space.handle(parse_type("(o->o)->o"))
    assert info.value.estimate == 3 ** 11
    assert "(o->o)->o" in str(info.value)


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("HOLWFS_MAX_DOMAIN", "1234")
    assert default_cap() == 1234
    monkeypatch.delenv("HOLWFS_MAX_DOMAIN")
    assert default_cap() == 20000


def test_dump_format(two):
    text = two.handle(OO, "ma").dump()
    lines = text.splitlines()
    assert lines[0] == "# domain o->o flavor=ma count=5"
    assert lines[1] == "0: {0: false, 1: false, 2: false}"
    assert len(lines) == 6


def test_canonical_order_is_sorted(two):
    for t in (OO, IO, parse_type("o->o->o")):
        for flavor in Flavor:
            els = two.handle(t, flavor).elements
            assert list(els) == sorted(els)


def test_memoized(two):
    assert two.handle(OO) is two.handle(OO, "three")


def test_leaf_count(two):
    assert two.leaf_count(O) == 1
    assert two.leaf_count(OO) == 3
    assert two.leaf_count(IO) == 2
    assert two.leaf_count(parse_type("(o->o)->o->o")) == 11 * 3


# --- lattice laws -------------------------------------------------------------

LATTICE_CASES = [("o", 1), ("o->o", 1), ("i->o", 1), ("i->o", 2)]


def _chains(elements, le):
    """All nonempty chains of a small poset."""
    n = len(elements)
    out = []

    def extend(chain, start):
        out.append(chain)
        for j in range(start, n):
            if all(le(elements[i], elements[j]) or le(elements[j], elements[i]) for i in chain):
                extend(chain + [j], j + 1)

    for i in range(n):
        extend([i], i + 1)
    return [[elements[i] for i in c] for c in out]


@pytest.mark.parametrize("text, n", LATTICE_CASES)
@pytest.mark.parametrize("flavor", ["three", "ma", "am"])
def test_truth_order_is_a_complete_lattice(text, n, flavor):
    t = parse_type(text)
    space = DomainSpace([f"c{i}" for i in range(n)])
    els = space.handle(t, flavor).elements
    members = set(els)
    bot, top = space.bottom(t, flavor), space.top(t, flavor)
    assert all(brute.truth_le(bot, x) and brute.truth_le(x, top) for x in els)
    for x in els:
        for y in els:
            j = space.lub([x, y], t, flavor=flavor)
            m = space.glb([x, y], t, flavor=flavor)
            assert j in members and m in members
            uppers = [u for u in els if brute.truth_le(x, u) and brute.truth_le(y, u)]
            lowers = [w for w in els if brute.truth_le(w, x) and brute.truth_le(w, y)]
            assert all(brute.truth_le(j, u) for u in uppers) and j in uppers
            assert all(brute.truth_le(w, m) for w in lowers) and m in lowers
    assert space.lub(els, t, flavor=flavor) == top
    assert space.glb(els, t, flavor=flavor) == bot


@pytest.mark.parametrize("text, n", LATTICE_CASES)
def test_information_order_is_chain_complete(text, n):
    t = parse_type(text)
    space = DomainSpace([f"c{i}" for i in range(n)])
    els = space.handle(t).elements
    members = set(els)
    assert all(preceq_values(space.bottom(t, order="preceq"), x) for x in els)
    for chain in _chains(els, brute.info_le):
        lub = space.lub(chain, t, order="preceq")
        assert lub in members
        uppers = [u for u in els if all(brute.info_le(c, u) for c in chain)]
        assert lub in uppers and all(brute.info_le(lub, u) for u in uppers)


def test_pair_domain_lattices():
    space = DomainSpace(["c0"])
    els = space.handle(OO, "pair").elements
    for x in els:
        for y in els:
            j = space.lub([x, y], OO, flavor="pair")
            assert j in set(els)
            assert brute.pair_truth_le(x, j) and brute.pair_truth_le(y, j)
    for chain in _chains(els, brute.pair_info_le):
        lub = space.lub(chain, OO, order="preceq", flavor="pair")
        uppers = [u for u in els if all(brute.pair_info_le(c, u) for c in chain)]
        assert lub in uppers and all(brute.pair_info_le(lub, u) for u in uppers)


def test_interlattice_properties_at_o_to_o():
    space = DomainSpace(["c0"])
    l1 = space.handle(OO, "ma").elements
    l2 = space.handle(OO, "am").elements
    for b in l2:
        for r in range(1, len(l1) + 1):
            for s in combinations(l1, r):
                if all(brute.truth_le(x, b) for x in s):
                    assert brute.truth_le(space.lub(s, OO, flavor="ma"), b)
    for a in l1:
        for r in range(1, len(l2) + 1):
            for s in combinations(l2, r):
                if all(brute.truth_le(a, y) for y in s):
                    assert brute.truth_le(a, space.glb(s, OO, flavor="am"))


def test_lub_dominated_in_information_order_at_o():
    related = [(x, y) for x in (FALSE, UNDEF, TRUE) for y in (FALSE, UNDEF, TRUE) if preceq_values(x, y)]
    space = DomainSpace(["c0"])
    for r in range(1, len(related) + 1):
        for family in combinations(related, r):
            left = space.lub([d for d, _ in family], O)
            right = space.lub([d for _, d in family], O)
            assert preceq_values(left, right)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_lub_dominated_in_information_order_at_o_to_o(data):
    space = DomainSpace(["c0"])
    els = space.handle(OO).elements
    related = [(x, y) for x in els for y in els if preceq_values(x, y)]
    family = data.draw(st.lists(st.sampled_from(related), min_size=1, max_size=5))
    assert preceq_values(space.lub([d for d, _ in family], OO), space.lub([d for _, d in family], OO))


# --- floors and ceilings ------------------------------------------------------

@pytest.mark.parametrize("text, n", [("o", 1), ("o->o", 1), ("i->o", 1), ("i->o", 2), ("o->o->o", 1), ("(o->o)->o", 1)])
def test_floor_and_ceiling_closure_matches_filtering(text, n):
    t = parse_type(text)
    space = DomainSpace([f"c{i}" for i in range(n)])
    for x in space.handle(t, "ma"):
        fast = space.am_floor(t, x)
        assert fast == space.am_floor_reference(t, x) == brute.am_floor(t, x, n)
    for y in space.handle(t, "am"):
        fast = space.ma_ceiling(t, y)
        assert fast == space.ma_ceiling_reference(t, y) == brute.ma_ceiling(t, y, n)


def test_floor_example_at_o_to_o():
    space = DomainSpace(["c0"])
    # keys are (f,f), (f,t), (t,t); the ma table (f,f)->f, (f,t)->f, (t,t)->t
    x = (FALSE, FALSE, TRUE)
    # antitone from (f,t) up to (t,t) forces (f,t)->t
    assert space.am_floor(OO, x) == (FALSE, TRUE, TRUE)
    assert space.am_floor(OO, space.bottom(OO, "ma")) == space.bottom(OO, "am")
    assert space.ma_ceiling(OO, space.top(OO, "am")) == space.top(OO, "ma")


def test_cross_order_masks():
    space = DomainSpace(["c0"])
    ma, am = space.handle(OO, "ma"), space.handle(OO, "am")
    cross = space.cross_up(OO)
    for i, x in enumerate(ma):
        for j, y in enumerate(am):
            assert bool(cross[i] >> j & 1) == brute.truth_le(x, y)


def test_dump_lists_every_element(two):
    lines = two.handle(O).dump().splitlines()
    assert lines[0].startswith("# domain o") and len(lines) == 4
