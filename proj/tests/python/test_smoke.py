"""Smoke tests for the python bindings (run with PYTHONPATH at the build dir)."""

import _qplocal as q


def test_character_and_hilbert():
    assert q.chi(3, "2") == -1
    assert q.chi(5, "-1") == 1
    assert q.hilbert("-1", "-1", "2") == -1
    assert q.hilbert("-1", "-1", "infinity") == -1
    assert q.hilbert("3", "3", "3") == -1


def test_diagonalize_and_represents():
    assert q.diagonalize(3, "p^3,D*p,1") == [(0, "1"), (1, "D"), (3, "1")]
    assert q.represents(3, "1,1,D", "plus")
    assert not q.represents(3, "1,1,D", "minus")
    assert q.represents(3, "1,p,p", "minus")


def test_density_paths_agree():
    value, deriv, represented = q.density(3, "splus", "1,1,D")
    assert value == "80/81" and represented
    assert q.density_brute(3, "slattice", "1,1,D", 2) == "80/81"
    zero, dzero, rep = q.density(3, "splus", "1,D,p")
    assert zero == "0" and not rep
    assert dzero == "-80/81"


def test_length_and_tube():
    assert q.length(3, "1,1,p") == ("1", True, "a2 even")
    assert q.length(3, "1,p,p^2") == ("3", True, "a2 odd")
    count, edges, represented = q.tube(3, "p,p,p")
    assert (count, edges, represented) == ("1", "0", True)


def test_classify_and_whittaker():
    locus, reasons = q.classify(3, "1,1,1", "inert")
    assert locus == "empty" and reasons
    locus2, _ = q.classify(3, "p,p,p^2", "inert")
    assert locus2 == "contains-components"
    mag, gamma, logp = q.whittaker(3, "1,D,p", "inert")
    assert (mag, gamma, logp) == ("16/81", "gV'", 0)
    dmag, dgamma, dlogp = q.whittaker_derivative(3, "1,D,p", "inert")
    assert (dmag, dgamma, dlogp) == ("80/81", "gV", 1)


def test_diff():
    places, regular, _ = q.diff(["1", "1", "7"], ["1", "-1", "1", "-1"], "1")
    assert places == ["7"] and regular
