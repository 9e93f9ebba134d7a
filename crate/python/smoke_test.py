"""Smoke test for the compiled extension: python python/smoke_test.py"""

import json

import tetraflex_py as tf


def main() -> None:
    dims = [1.0, 1.3, 0.8]

    motion = tf.third_kind(dims, 0.3, "+-+")
    assert motion["max_residual"] < 1e-12, motion

    result = tf.classify(dims, {"rotation": motion["rotation"], "translation": motion["translation"]})
    assert result["classification"]["kind"] == "third", result
    assert max(abs(r) for r in result["scaled_residuals"]) < 1e-12

    conn = tf.connectivity(dims)
    assert conn["class"] == "three_components" and len(conn["intervals"]) == 3, conn
    assert tf.connectivity([1.5, 1.5, 0.4])["class"] == "connected"

    try:
        tf.third_kind(dims, 5.0, "+-+")
    except ValueError:
        pass
    else:
        raise AssertionError("infeasible s accepted")

    code, out, err = tf.run(["mobility", "--pyramid", "5", "--regular"])
    assert code == 0, err
    assert json.loads(out)["results"]["mobility"]["dof"] == 1
    assert tf.run(["families"])[0] == 4

    print("smoke test passed")


def test_smoke() -> None:
    main()


if __name__ == "__main__":
    main()
