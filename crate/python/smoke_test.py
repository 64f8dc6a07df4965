#!/usr/bin/env python3
"""Smoke test for the lmonoid_py extension module.

Build it first with `cargo build -p lmonoid-py`, then run this script; it
finds the cdylib under target/, loads it, and exercises the main types.
"""

import importlib.util
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    stem = "lmonoid_py"
    names = [f"lib{stem}.so", f"{stem}.so", f"lib{stem}.dylib", f"{stem}.pyd"]
    candidates = [
        path
        for profile in ("debug", "release")
        for name in names
        if (path := ROOT / "target" / profile / name).exists()
    ]
    if not candidates:
        sys.exit("build the extension first: cargo build -p lmonoid-py")
    newest = max(candidates, key=lambda p: p.stat().st_mtime)
    spec = importlib.util.spec_from_file_location(stem, newest)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    lm = load_module()

    # Words: parsing, printing, structure.
    w = lm.Word("G3+C2")
    assert str(w) == "G3+C2"
    assert w.letters == ["G3", "C2"]
    assert w.size == 4
    assert lm.Word("0").size == 1
    assert w.dual().letters == ["G3", "C2d"]
    assert w.opposite().letters == ["D3", "C2"]
    assert not lm.Word("C2+C2").is_sdi()
    assert lm.Word("C2+C2d").is_sdi()

    # Composition and decomposition round trip.
    a = w.compose()
    assert a.size == 4 and a.unit == 2
    assert a.decompose() == w
    assert lm.Algebra(a.text()) == a
    assert a.product(0, 3) == 0
    rows = a.table()
    assert len(rows) == 4 and rows[a.unit][3] == 3

    # Counting agrees with enumeration.
    assert lm.count_all(5) == 44
    assert lm.count_sdi(5) == 22
    assert lm.count_commutative(5) == 16
    assert len(lm.enumerate_words(3)) == 6
    assert len(lm.enumerate_words(3, "sdi")) == 4
    assert lm.count_all(64) > 10**27  # exact big integers cross the u64 line

    # Equations: the two-element chain with one positive element fails x1 <= e.
    c2d = lm.Word("C2d").compose()
    assert c2d.check("x1 <= e") == [1]
    assert c2d.satisfies("e <= x1")
    assert lm.sigma(3) == "x1 <= e v x1*x2"
    assert lm.sigma_dual(2) == "e <= x1"
    assert lm.gamma(3) == "x1*(e ^ x3*x4) <= (e v x1*x2)*x3"

    # Congruences of the three-element zig-zag chain.
    c3 = lm.Word("C2+C2d").compose()
    assert c3.is_sdi()
    assert c3.monolith() == "0-0;1-2"
    assert len(c3.congruences()) == 3
    assert c3.has_cep()
    assert not lm.Word("C2+C2d+C2").compose().has_cep()

    # Membership and embedding.
    assert lm.member(lm.Word("C2"), [lm.Word("C2+C2d")])
    assert not lm.member(lm.Word("G3"), [lm.Word("C2+C2d")])
    assert lm.Word("C2d").embeds(lm.Word("C2+C2d")) == [1]
    assert lm.Word("G3").embeds(lm.Word("D3")) is None

    # Amalgamation: merge a compatible span, refuse a forbidden one.
    result, j1, j2, strong = lm.amalgamate(
        lm.Word("C2d"), lm.Word("G3"), [0], lm.Word("C2d+C2"), [0]
    )
    assert str(result) == "G3+C2" and j1 == [0] and j2 == [0, 1] and strong
    found = lm.search_amalgam(
        lm.Word("C2d"), lm.Word("G3"), [0], lm.Word("C2d+C2"), [0]
    )
    assert found is not None and str(found[0]) == "G3+C2"
    try:
        lm.amalgamate(lm.Word("C2"), lm.Word("G3"), [0], lm.Word("D3"), [0])
    except ValueError as e:
        assert "position 0" in str(e)
    else:
        sys.exit("expected the forbidden span to raise")
    assert (
        lm.search_amalgam(lm.Word("C2"), lm.Word("G3"), [0], lm.Word("D3"), [0])
        is None
    )

    # Amalgamation property of generated varieties.
    assert lm.variety_status([lm.Word("G3")]) == "yes"
    assert lm.variety_status([lm.Word("G3"), lm.Word("D3")]) == "no"

    print("ok")


if __name__ == "__main__":
    main()
