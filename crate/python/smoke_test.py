"""Quick end-to-end check of the popmat_py extension module.

Build it first, for example with `maturin develop -m crates/python/Cargo.toml`.
"""

import popmat_py as pm


def main():
    inst = pm.Instance.generate("graphic", 8, seed=3)
    best = inst.max_popular()
    assert inst.is_common_independent(best)
    assert inst.vote(best, best) == 0
    assert inst.vote(best, best, weak=True) == 0
    verdict = inst.classify(best)
    assert verdict["super_popular"] and verdict["popular"], verdict
    assert len(best) == inst.max_weakly_defendable_size()
    kernel = inst.kernel()
    assert inst.is_common_independent(kernel)
    again = pm.Instance.from_json(inst.to_json())
    assert again.max_popular() == best

    try:
        pm.Instance.generate("partition", 14, seed=1).classify([])
    except pm.ScaleError:
        pass
    else:
        raise AssertionError("expected a scale refusal")
    try:
        pm.Instance.from_json("{")
    except ValueError:
        pass
    else:
        raise AssertionError("expected a parse error")

    gadget = pm.BMatching.example1(1)
    forced = [("u1", "v2"), ("u2", "v2"), ("u3", "v1"), ("u4", "v1")]
    out = gadget.popularity(forced)
    assert out["status"] == "dominated" and out["margin"] == 2, out
    beaten = [tuple(e) for e in out["witness"]]
    assert gadget.vote(beaten, forced) == 2

    padded = pm.BMatching.example1(2, dummies=True)
    assert padded.popularity(padded.stored("candidate"))["status"] == "popular"

    red = pm.BMatching.x3c([[1, 2, 3]] * 3, cover=[1])
    assert red.vote(red.stored("candidate"), red.stored("witness")) == -1

    eq = gadget.equalize()
    assert len(eq.stored("fixed")) == 3

    print("smoke test passed:", inst, gadget, red)


if __name__ == "__main__":
    main()
