"""Final energies across a refinement family of solves."""

from __future__ import annotations

import numpy as np

from ..errors import ContractError


def _config_key(hist):
    s = hist.grid.spec
    bc = hist.bc
    bc_key = (bc.kind, bc.lam, bc.b_z) if bc.kind == "affine" else (bc.kind,)
    return (s.kind, s.r_min, s.r_max, s.z_min, s.z_max, hist.law, bc_key)


def defect_gap(histories) -> list[dict]:
    """Rows ``(h, G_final, grad_norm, gap_to_finest, diff_to_next)`` sorted coarse to fine.

    All histories must solve the same physical problem (domain rectangle,
    material law and boundary-data kind). ``diff_to_next`` is
    ``|G_final(h) - G_final(next finer h)|``; for smooth problems it decays like
    the discretization error, a non-vanishing ``gap_to_finest`` along a family
    signals energy concentration.
    """
    histories = list(histories)
    if len(histories) < 2:
        raise ContractError("defect_gap needs at least two resolutions")
    keys = {_config_key(h) for h in histories}
    if len(keys) != 1:
        raise ContractError("histories describe different physical problems")
    hs = [h.grid.h for h in histories]
    if len(set(hs)) != len(hs):
        raise ContractError("histories must have distinct mesh sizes")
    order = np.argsort(hs)[::-1]
    hist = [histories[k] for k in order]
    G = [h.G[-1] for h in hist]
    rows = []
    for k, h in enumerate(hist):
        rows.append({"h": h.grid.h, "G_final": G[k], "grad_norm": h.grad_norm[-1],
                     "gap_to_finest": G[k] - G[-1],
                     "diff_to_next": abs(G[k] - G[k + 1]) if k + 1 < len(hist) else None,
                     "status": h.status})
    return rows
