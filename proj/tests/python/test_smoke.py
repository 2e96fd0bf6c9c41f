import pytest

import scopekit


def test_fragment_listing():
    names = scopekit.fragments()
    assert len(names) == 128
    assert "base" in names


def test_identity_table():
    out = scopekit.run("x : b |- val x", fragment="base", monad="identity")
    assert out["sort"] == "C b"
    assert [v for _, v in out["table"]] == ["b0", "b1"]


def test_factorial():
    program = """n : Nat |-
letrec
  add(a : Nat, b : Nat) : Nat =
    case unroll (val a) of <0 u -> val b | 1+ p -> roll (<0:{}, 1+:Nat>.1+ val add @(val p, val b))>;
  mul(a : Nat, b : Nat) : Nat =
    case unroll (val a) of <0 u -> val 0 | 1+ p -> val add @(val b, val mul @(val p, val b))>;
  fact(k : Nat) : Nat =
    case unroll (val k) of <0 u -> val 1 | 1+ p -> val mul @(val k, val fact @(val p))>
in val fact @(val n)"""
    table = dict(scopekit.run(program, nat_bound=25)["table"])
    assert table["(n = 3)"] == "Some 6"
    assert table["(n = 4)"] == "Some 24"
    assert table["(n = 5)"] == "None"


def test_merging_substitution():
    term = "f : (b->b), g : (b->b) |- val \\x : b. (val f) ((val g) (val x))"
    out = scopekit.substitute(term, "h : (b->b) |- f := h, g := h", fragment="functions")
    assert out == "val (\\x1 : b. val h (val h val x1))"


def test_errors():
    with pytest.raises(scopekit.ScopekitError, match="UnknownVariable"):
        scopekit.run("x : b |- val y", fragment="base")
    with pytest.raises(scopekit.UnsupportedCapability):
        scopekit.run("x : b |- for i = val x in <Cont:b, Done:b>.Cont val i", monad="identity")
    with pytest.raises(scopekit.ScopekitError):
        scopekit.check("nonsense")


def test_suites():
    records = scopekit.check("monad-laws", monads=["option"])
    assert records and all(r["passed"] for r in records)
    assert any(r["axiom"].startswith("mutation detected") for r in records)
    coend = scopekit.check("coend")
    assert all(r["passed"] for r in coend)
