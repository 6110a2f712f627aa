import numpy as np
import pytest

from quatloops.clifford import (BIVECTOR_LABELS, CATALOG, E_BAR_E_CLAIMED, ETA, PRODUCT_COMMON, BasisCatalog,
                                GarlingCoeffs, bar, consistent_chain_signs, dirac_gammas, garling_embed,
                                garling_pattern, gamma_recipes, identity_report, normalize_label,
                                product_identity_check, stereographic, x21d)

# independent transcription of the printed listings, kept separate from the module's table
i = 1j
LISTED_E = [
    [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]],
    [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    [[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]],
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
]
LISTED_REF = [[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]]
LISTED_BIV = {
    "23": [[0, -i, 0, 0], [-i, 0, 0, 0], [0, 0, 0, i], [0, 0, i, 0]],
    "13": [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
    "12": np.diag([-i, i, -i, i]),
    "14": [[0, -1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    "24": [[0, i, 0, 0], [-i, 0, 0, 0], [0, 0, 0, i], [0, 0, -i, 0]],
    "34": np.diag([-1, 1, 1, -1]),
}
LISTED_BIV_BAR = {
    "23": [[0, 0, 0, i], [0, 0, -i, 0], [0, -i, 0, 0], [i, 0, 0, 0]],
    "13": [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
    "12": [[0, 0, -i, 0], [0, 0, 0, -i], [-i, 0, 0, 0], [0, -i, 0, 0]],
    "14": [[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
    "24": [[0, 0, 0, i], [0, 0, i, 0], [0, i, 0, 0], [i, 0, 0, 0]],
    "34": [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]],
}


def test_catalog_matches_listing_exactly():
    for k in range(4):
        np.testing.assert_array_equal(CATALOG.e[k], LISTED_E[k])
    np.testing.assert_array_equal(CATALOG.ref, LISTED_REF)
    for lab in BIVECTOR_LABELS:
        np.testing.assert_array_equal(CATALOG.biv[lab], LISTED_BIV[lab])
        np.testing.assert_array_equal(CATALOG.biv_bar[lab], LISTED_BIV_BAR[lab])


def test_catalog_is_read_only():
    with pytest.raises(ValueError):
        CATALOG.e[0][0, 0] = 5
    with pytest.raises(TypeError):
        CATALOG.biv["23"] = np.eye(4)


def test_signature():
    for a in range(4):
        for b in range(4):
            s = CATALOG.e[a] @ CATALOG.e[b] + CATALOG.e[b] @ CATALOG.e[a]
            np.testing.assert_array_equal(s, 2 * ETA[a, b] * np.eye(4))


def test_bivectors_square_to_sign_and_anticommute_or_commute():
    for lab in BIVECTOR_LABELS:
        sq = CATALOG.biv[lab] @ CATALOG.biv[lab]
        assert np.array_equal(sq, np.eye(4)) or np.array_equal(sq, -np.eye(4))


def test_normalize_label():
    assert normalize_label("31") == "13"
    assert normalize_label("-42") == "24"
    with pytest.raises(KeyError):
        normalize_label("11")
    with pytest.raises(KeyError):
        normalize_label("5")


def test_basis_lookup():
    np.testing.assert_array_equal(CATALOG.basis("I"), np.eye(4))
    np.testing.assert_array_equal(CATALOG.basis("I", barred=True), CATALOG.ref)
    np.testing.assert_array_equal(CATALOG.basis("31", barred=True), CATALOG.biv_bar["13"])


def test_bar_rules():
    for lab in BIVECTOR_LABELS:
        np.testing.assert_array_equal(bar(CATALOG.biv[lab], "even"), CATALOG.biv_bar[lab])
    np.testing.assert_array_equal(bar(CATALOG.e[0], "vector"), -CATALOG.ref @ CATALOG.e[0])
    with pytest.raises(ValueError):
        bar(np.eye(4), "odd")
    with pytest.raises(ValueError):
        bar(np.eye(3), "even")


def test_e_bar_e_values():
    ref = CATALOG.ref
    products = [e @ bar(e, "vector") for e in CATALOG.e]
    for k in (0, 1):
        np.testing.assert_array_equal(products[k], ref)
    for k in (2, 3):
        np.testing.assert_array_equal(products[k], -ref)
    # the claimed value for e4 differs from the computed one
    assert not np.array_equal(products[3], -E_BAR_E_CLAIMED)


def test_product_chain_signs():
    assert product_identity_check() == 2.0
    signs = dict(consistent_chain_signs())
    assert signs == {"12": 1, "13": -1, "14": -1, "23": 1, "24": 1, "34": 1}
    assert product_identity_check(signs=tuple(signs.items())) == 0.0
    for lab, s in signs.items():
        np.testing.assert_array_equal(s * CATALOG.biv[lab] @ CATALOG.biv_bar[lab], PRODUCT_COMMON)


def test_dirac_gammas_and_recipes():
    g = dirac_gammas()
    np.testing.assert_array_equal(g[0], np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]]))
    for a, b in [(0, 0), (1, 1), (0, 1), (2, 3)]:
        want = 2 * (1 if a == 0 else -1) * np.eye(4) if a == b else np.zeros((4, 4))
        np.testing.assert_array_equal(g[a] @ g[b] + g[b] @ g[a], want)
    rec = gamma_recipes()
    for lab in BIVECTOR_LABELS:
        np.testing.assert_array_equal(CATALOG.gamma_biv[lab], rec[lab])


def test_garling_embedding_matches_pattern(rng):
    for _ in range(20):
        lam = dict(zip(BIVECTOR_LABELS, rng.normal(size=6)))
        c = GarlingCoeffs(0.0, lam)
        np.testing.assert_allclose(garling_embed(c), garling_pattern(c), atol=1e-14)


def test_x21d_is_conformal_block_form():
    m = x21d(0.3, -0.7)
    x, xb = m[:2, :2], m[2:, 2:]
    np.testing.assert_allclose(m[:2, 2:], x @ xb, atol=1e-14)
    np.testing.assert_array_equal(m[2:, :2], np.eye(2))


def test_stereographic_lands_on_sphere(rng):
    for _ in range(10):
        p = stereographic(rng.normal(size=3))
        assert abs(p @ p - 1) < 1e-12
    np.testing.assert_allclose(stereographic([0, 0]), [0, 0, 1])


def test_identity_report_rows():
    rows = {name: ok for name, ok, _ in identity_report()}
    failing = {name for name, ok in rows.items() if not ok}
    assert failing == {
        "listed bivectors equal e_i e_j",
        "product chain e_ie_j . bar(e_ie_j) with printed signs equals common matrix",
        "e4 . bar(e4) equals [[0, -I2], [I2, 0]]",
        "sum_i e_i bar(e_i) + bar(e_i) e_i = 0",
    }


def test_identity_report_detects_mutation():
    e = list(CATALOG.e)
    e[1] = -e[1] @ e[0]
    mutated = BasisCatalog(tuple(e), CATALOG.biv, CATALOG.ref, CATALOG.biv_bar, CATALOG.qju, CATALOG.gamma_biv)
    rows = {name: ok for name, ok, _ in identity_report(mutated)}
    assert not rows["basis anticommutation e_a e_b + e_b e_a = 2 eta_ab I4"]


def test_only_e1e4_listing_is_the_product():
    same = [lab for lab in BIVECTOR_LABELS
            if np.array_equal(CATALOG.biv[lab], CATALOG.e[int(lab[0]) - 1] @ CATALOG.e[int(lab[1]) - 1])]
    assert same == ["14"]


def test_e4_is_antihermitian_with_imaginary_spectrum():
    from quatloops.numeric import dagger, eig
    np.testing.assert_array_equal(dagger(CATALOG.e[3]), -CATALOG.e[3])
    np.testing.assert_allclose(np.sort_complex(eig(CATALOG.e[3])), [-1j, -1j, 1j, 1j], atol=1e-12)
