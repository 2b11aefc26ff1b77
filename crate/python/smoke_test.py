"""Smoke test for the fdoa_py extension module."""

import fdoa_py


def main():
    s = fdoa_py.Scenario.equal_velocity("1", "1/2")
    print(s, s.to_dict())
    assert s.is_real() and s.satisfies_no_l_factors()

    z = fdoa_py.singularities(s, "Z")
    assert len(z["points"]) == 6 and z["genus"] == 1, z
    v = fdoa_py.singularities(s, "V")
    assert v["genus"] == 1, v

    assert fdoa_py.genus_degree(4, [(2, 1), (2, 1)]) == 1
    assert fdoa_py.genus_degree(8, [(4, 8), (4, 8)] + [(2, 1)] * 4) == 1

    # The sensor point [1, 1, 0] lies on every octic Z; a generic point does not.
    assert fdoa_py.membership(["1", "1", "0"], "PLANE", "Z", s)
    assert not fdoa_py.membership(["1", "2", "3"], "PLANE", "Z", s)
    assert fdoa_py.membership(["1", "0", "0", "0", "0"], "W", "Y")

    report = fdoa_py.check_identities(n=3, seed=1)
    assert report["passed"], report
    bad = fdoa_py.check_identities(n=1, seed=1, inject_fault="alpha_beta")
    assert not bad["passed"] and bad["failed_identities"] == ["alpha_beta"], bad

    branches = fdoa_py.trace(s, grid=128)
    assert set(branches) == {"App", "Amm", "Amp", "Apm"}
    assert all(branches[k] for k in branches), {k: len(p) for k, p in branches.items()}
    y1, y2 = branches["App"][0][0]
    assert isinstance(y1, float) and isinstance(y2, float)

    try:
        fdoa_py.Scenario("1", "x", "0", "0", "1")
    except ValueError:
        pass
    else:
        raise AssertionError("bad literal accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
