import pytest
from hypothesis import given, strategies as st

from scopelab.errors import ScopeDeclError, UnboundVariable
from scopelab.scoping import (
    UNSET,
    Discipline,
    FrameFactory,
    FrameKind,
    bind_let,
    declare_scoped,
    resolve,
    super_assign,
)

DYNAMIC, LEXICAL = Discipline.DYNAMIC, Discipline.LEXICAL


@pytest.fixture
def inner_outer():
    """Global x=3; outer holds a local x=6 and calls inner (both defined at top level)."""
    frames = FrameFactory()
    g = frames.global_frame
    g.bindings["x"] = 3
    outer = frames.new_frame("outer", g, g)
    outer.bindings["x"] = 6
    inner = frames.new_frame("inner", g, outer)
    return g, outer, inner


def test_dynamic_resolve_finds_callers_binding(inner_outer):
    g, outer, inner = inner_outer
    value, hit, missed = resolve("x", inner, DYNAMIC)
    assert (value, hit.label, [f.label for f in missed]) == (6, "OUTER", ["INNER"])


def test_lexical_resolve_skips_caller(inner_outer):
    g, outer, inner = inner_outer
    value, hit, missed = resolve("x", inner, LEXICAL)
    assert (value, hit.label, [f.label for f in missed]) == (3, "GLOBAL", ["INNER"])


@pytest.mark.parametrize("discipline", list(Discipline))
def test_unbound_reports_miss_path(discipline):
    g = FrameFactory().global_frame
    with pytest.raises(UnboundVariable) as info:
        resolve("nope", g, discipline)
    assert info.value.missed == ["GLOBAL"]


def _macro_frames():
    frames = FrameFactory()
    g = frames.global_frame
    g.bindings.update(x1=9, y1=7)
    return g, frames.new_frame("my_macro2", g, g)


def test_dynamic_let_rebinds_existing_global():
    g, local = _macro_frames()
    assert bind_let("x1", 19, local, DYNAMIC) is g
    assert bind_let("y1", 17, local, DYNAMIC) is g
    assert g.bindings == {"x1": 19, "y1": 17}
    assert local.bindings == {}


def test_lexical_let_binds_in_current():
    g, local = _macro_frames()
    assert bind_let("x1", 19, local, LEXICAL) is local
    assert g.bindings["x1"] == 9


def test_dynamic_let_of_fresh_name_is_local():
    g, local = _macro_frames()
    assert bind_let("a", 3, local, DYNAMIC) is local
    assert "a" not in g.bindings


def test_dynamic_let_rebinds_nearest_intermediate():
    frames = FrameFactory()
    g = frames.global_frame
    g.bindings["v"] = 1
    mid = frames.new_frame("mid", g, g)
    mid.bindings["v"] = 2
    leaf = frames.new_frame("leaf", g, mid)
    assert bind_let("v", 5, leaf, DYNAMIC) is mid
    assert (g.bindings["v"], mid.bindings["v"]) == (1, 5)


def test_local_declaration_shields_global():
    frames = FrameFactory()
    g = frames.global_frame
    g.bindings.update(x2=9, y2=7)
    local = frames.new_frame("my_macro2", g, g)
    local.bindings["x2"] = UNSET  # parameter without argument
    declare_scoped("y2", None, local, FrameKind.LOCAL)
    bind_let("x2", 19, local, DYNAMIC)
    bind_let("y2", 17, local, DYNAMIC)
    assert (g.bindings["x2"], g.bindings["y2"]) == (9, 7)
    assert local.bindings == {"x2": 19, "y2": 17}


def test_local_declaration_keeps_existing_value():
    frames = FrameFactory()
    local = frames.new_frame("f", frames.global_frame, frames.global_frame)
    local.bindings["k"] = 4
    declare_scoped("k", None, local, FrameKind.LOCAL)
    assert local.bindings["k"] == 4
    declare_scoped("k", 8, local, FrameKind.LOCAL)
    assert local.bindings["k"] == 8


def test_local_at_top_level_is_an_error():
    g = FrameFactory().global_frame
    with pytest.raises(ScopeDeclError):
        declare_scoped("y", None, g, FrameKind.LOCAL)


def test_global_declaration_from_inside():
    frames = FrameFactory()
    g = frames.global_frame
    inner = frames.new_frame("setup", g, frames.new_frame("caller", g, g))
    declare_scoped("cfg", 42, inner, FrameKind.GLOBAL)
    assert g.bindings["cfg"] == 42
    declare_scoped("cfg", None, inner, FrameKind.GLOBAL)
    assert g.bindings["cfg"] == 42
    declare_scoped("other", None, inner, FrameKind.GLOBAL)
    assert g.bindings["other"] is UNSET


def test_super_assign_writes_first_lexical_ancestor():
    frames = FrameFactory()
    g = frames.global_frame
    g.bindings["acc"] = 0
    f = frames.new_frame("f", g, g)
    f.bindings["acc"] = 10
    inner = frames.new_frame("g", f, f)
    inner.bindings["acc"] = 99  # the current frame is skipped
    assert super_assign("acc", 15, inner) is f
    assert (g.bindings["acc"], f.bindings["acc"], inner.bindings["acc"]) == (0, 15, 99)


def test_super_assign_falls_back_to_global():
    frames = FrameFactory()
    g = frames.global_frame
    f = frames.new_frame("f", g, g)
    assert super_assign("fresh", 5, f) is g
    assert g.bindings["fresh"] == 5


def test_super_assign_counter_trace():
    frames = FrameFactory()
    g = frames.global_frame
    g.bindings["count"] = 0
    for _ in range(2):
        bump = frames.new_frame("bump", g, g)
        value, _, _ = resolve("count", bump, LEXICAL)
        super_assign("count", value + 1, bump)
    assert g.bindings["count"] == 2


def test_new_frame_links_and_ids():
    frames = FrameFactory()
    g = frames.global_frame
    h = frames.new_frame("h", g, g)
    assert (h.label, h.kind, h.lexical_parent, h.dynamic_caller) == ("H", FrameKind.LOCAL, g, g)
    outer = frames.new_frame("outer", g, g)
    inner = frames.new_frame("inner", g, outer)
    assert inner.dynamic_caller is outer and inner.lexical_parent is g
    again = frames.new_frame("h", g, g)
    assert g.id < h.id < outer.id < inner.id < again.id
    assert g.lexical_parent is None and g.dynamic_caller is None


# --- random frame forests ----------------------------------------------------


@st.composite
def frame_worlds(draw):
    """A global frame plus local frames with arbitrary (earlier) lexical and dynamic parents."""
    frames = FrameFactory()
    world = [frames.global_frame]
    names = st.sampled_from("abcd")
    for key in draw(st.lists(names, max_size=3)):
        world[0].bindings[key] = draw(st.integers(-5, 5))
    for i in range(draw(st.integers(0, 6))):
        lex = world[draw(st.integers(0, len(world) - 1))]
        dyn = world[draw(st.integers(0, len(world) - 1))]
        frame = frames.new_frame(f"f{i}", lex, dyn)
        for key in draw(st.lists(names, max_size=3)):
            frame.bindings[key] = draw(st.integers(-5, 5))
        world.append(frame)
    return world


def _snapshot(world):
    return [dict(f.bindings) for f in world]


@given(frame_worlds(), st.sampled_from(list(Discipline)))
def test_chains_terminate_at_global(world, discipline):
    for frame in world:
        chain = list(frame.chain(discipline))
        assert len(chain) <= len(world)
        assert chain[-1] is world[0]
        assert chain[-1].parent(discipline) is None


@given(frame_worlds(), st.sampled_from(list(Discipline)), st.sampled_from("abcde"), st.data())
def test_resolve_is_read_only(world, discipline, name, data):
    frame = data.draw(st.sampled_from(world))
    before = _snapshot(world)
    try:
        resolve(name, frame, discipline)
    except UnboundVariable:
        pass
    assert _snapshot(world) == before


@given(frame_worlds(), st.sampled_from(list(Discipline)), st.sampled_from("abcde"), st.integers(), st.data())
def test_bind_let_then_resolve(world, discipline, name, value, data):
    frame = data.draw(st.sampled_from(world))
    before = _snapshot(world)
    written = bind_let(name, value, frame, discipline)
    got, hit, _ = resolve(name, frame, discipline)
    assert (got, hit) == (value, written)
    after = _snapshot(world)
    changed = [i for i in range(len(world)) if before[i] != after[i]]
    assert changed in ([], [world.index(written)])


@given(frame_worlds(), st.sampled_from("abcde"), st.data())
def test_lexical_resolution_ignores_caller_links(world, name, data):
    frame = data.draw(st.sampled_from(world))

    def outcome():
        try:
            value, hit, _ = resolve(name, frame, LEXICAL)
            return hit.label, value
        except UnboundVariable:
            return None

    expected = outcome()
    for f in world[1:]:
        f.dynamic_caller = data.draw(st.sampled_from(world[: world.index(f)]))
    assert outcome() == expected


@given(frame_worlds(), st.sampled_from("abcde"), st.data())
def test_dynamic_resolution_ignores_lexical_links(world, name, data):
    frame = data.draw(st.sampled_from(world))

    def outcome():
        try:
            value, hit, _ = resolve(name, frame, DYNAMIC)
            return hit.label, value
        except UnboundVariable:
            return None

    expected = outcome()
    for f in world[1:]:
        f.lexical_parent = data.draw(st.sampled_from(world[: world.index(f)]))
    assert outcome() == expected


@given(frame_worlds(), st.sampled_from(list(Discipline)), st.lists(st.integers(), min_size=1, max_size=4), st.data())
def test_local_declaration_confines_let(world, discipline, values, data):
    locals_ = world[1:]
    if not locals_:
        return
    frame = data.draw(st.sampled_from(locals_))
    declare_scoped("d", None, frame, FrameKind.LOCAL)
    for v in values:
        assert bind_let("d", v, frame, discipline) is frame
