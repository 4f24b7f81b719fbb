"""Series coefficients of the ratio cut around the centred straight cut.

Every polynomial is stored as ten rationals in the order

    c0, cq, cp, ct, cqq, cqp, cqt, cpp, cpt, ctt

for the monomials 1, u, w, t, u^2, u*w, u*t, w^2, w*t, t^2 with
u = q - 1/2, w = p - 1/2, t = theta.  Entries are transcribed verbatim,
including places where the printed value disagrees with the functional;
the audit in :mod:`ratiocut.perturbation.audit` reports those.
"""

BASE = "8 0 0 0 24 -16 4/3 24 4/3 7/18"

FIRST_ORDER = {
    "a1": "-8 8 -8 2/3 -56 80 0 -56 0 -5/18",
    "a2": "-8 -8 8 -2/3 -56 80 0 -56 0 -5/18",
    "a3": "8 -8 8 2/3 56 -80 0 56 0 5/18",
    "eps_t": "4/3 0 0 0 52/3 -40 -8/9 100/3 -8/9 -1/108",
    "eps_b": "-4/3 0 0 0 -100/3 40 8/9 -52/3 8/9 1/108",
    "A_WL": "-32 32 32 8/3 -128 0 -32/3 -128 -32/3 -16/9",
    "A_WR": "-32 -32 -32 -8/3 -128 0 -32/3 -128 -32/3 -16/9",
}

SECOND_ORDER = {
    ("a1", "a1"): "20 -32 32 -4/3 240 -384 4 208 -4 1",
    ("a1", "a2"): "12 0 0 0 176 -320 -4 208 4 1/3",
    ("a1", "a3"): "-12 32 -32 0 -192 320 0 -192 0 -1/3",
    ("a2", "a2"): "20 32 -32 4/3 240 -384 4 208 -4 1",
    ("a2", "a3"): "-20 0 0 -4/3 -224 384 0 -224 0 -1",
    ("a3", "a3"): "20 -32 32 4/3 208 -384 -4 240 4 1",
    ("a1", "A_WL"): "80 -128 -64 -8 512 -256 80/3 448 32/3 4",
    ("a1", "A_WR"): "48 0 64 -8/3 256 -256 -16/3 320 32/3 4/3",
    ("a1", "eps_t"): "-8/3 8/3 -8 -1/9 -72 464/3 8/9 -104 8/9 -1/9",
    ("a1", "eps_b"): "8/3 -8/3 8 1/9 104 -464/3 -8/9 72 -8/9 1/9",
    ("a2", "A_WL"): "48 0 -64 8/3 256 -256 -16/3 320 32/3 4/3",
    ("a2", "A_WR"): "80 128 64 8 512 80/3 1 448 32/3 4",
    ("a2", "eps_t"): "-8/3 -8/3 8 1/9 -72 464/3 8/9 -104 8/9 -1/9",
    ("a2", "eps_b"): "8/3 8/3 -8 -1/9 104 -464/3 -8/9 72 -8/9 1/9",
    ("a3", "A_WL"): "-48 64 0 -8/3 -320 256 -32/3 -256 16/3 -4/3",
    ("a3", "A_WR"): "-80 -64 -128 -8 -448 256 -32/3 -512 -80/3 -4",
    ("a3", "eps_t"): "8/3 -8 8/3 -1/9 72 -464/3 -8/9 104 -8/9 1/9",
    ("a3", "eps_b"): "-8/3 8 -8/3 1/9 -104 464/3 8/9 -72 8/9 -1/9",
    ("A_WL", "A_WL"): "256 -512 -512 -128/3 1536 1024 512/3 1536 512/3 160/9",
    ("A_WL", "A_WR"): "128 0 0 0 512 0 128/3 512 128/3 64/9",
    ("A_WR", "A_WR"): "256 512 512 128/3 1536 1024 512/3 1536 512/3 160/9",
    ("A_WL", "eps_t"): "-16 32/3 32/3 -4/9 -320/3 512/3 32/9 -512/3 32/9 -8/27",
    ("A_WL", "eps_b"): "16 -32/3 -32/3 4/9 512/3 -512/3 -32/9 320/3 -32/9 8/27",
    ("A_WR", "eps_t"): "-16 -32/3 -32/3 4/9 -320/3 512/3 32/9 -512/3 32/9 -8/27",
    ("A_WR", "eps_b"): "16 32/3 32/3 -4/9 512/3 -512/3 -32/3 320/3 -32/9 8/27",
    ("eps_t", "eps_t"): "0 0 0 0 244/9 -568/9 -4/27 436/9 4/27 5/162",
    ("eps_t", "eps_b"): "0 0 0 0 -340/9 568/9 4/27 -340/9 4/27 -5/162",
    ("eps_b", "eps_b"): "0 0 0 0 436/9 -568/9 -4/27 244/9 4/27 5/162",
}
