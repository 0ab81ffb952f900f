"""Paired-comparison models: win/loss (logit) and margin-of-victory.

Both models share the same structure, a per-team strength plus a home
advantage, and both impose a sum-to-zero constraint on strengths so the
translation-invariant parameterization is pinned down. The win/loss model
is fit by damped Newton on a ridge-penalized log-likelihood (the penalty
keeps tiny, separated training sets well-posed); the margin model has a
closed-form penalized least-squares solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import FitError
from .ingest import Game

DEFAULT_PENALTY = 1.0
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100


@dataclass(frozen=True)
class BtFit:
    """Fitted win/loss model, strengths on the logit scale."""

    strengths: Mapping[str, float]
    home_adv: float
    penalty: float
    converged: bool
    iterations: int
    final_gradient_norm: float


@dataclass(frozen=True)
class MovFit:
    """Fitted margin model, strengths on the points scale."""

    strengths: Mapping[str, float]
    home_adv: float
    penalty: float
    residual_sd: float


def _check_train(train: Sequence[Game], teams) -> list[str]:
    if not train:
        raise ValueError("training set is empty")
    teams = set(teams)
    for g in train:
        if g.home not in teams or g.away not in teams:
            raise ValueError(f"game {g.game_id} involves a team outside the team set")
    return sorted(teams)


def _game_arrays(train: Sequence[Game], index: Mapping[str, int]):
    h = np.array([index[g.home] for g in train], dtype=np.intp)
    a = np.array([index[g.away] for g in train], dtype=np.intp)
    return h, a


def bt_objective_gradient(train: Sequence[Game], teams, strengths: Mapping[str, float],
                          home_adv: float, penalty: float):
    """Penalized log-likelihood and its full gradient at given parameters.

    Gradient coordinates are sorted(teams) strengths followed by the home
    advantage. Tied games are ignored, exactly as in fitting.
    """
    order = sorted(set(teams))
    index = {t: i for i, t in enumerate(order)}
    decisive = [g for g in train if g.margin != 0]
    h, a = _game_arrays(decisive, index)
    w = np.array([g.home_win for g in decisive], dtype=float)
    beta = np.array([strengths[t] for t in order], dtype=float)
    theta = np.append(beta, home_adv)
    obj, grad = _bt_obj_grad(theta, h, a, w, penalty)
    return obj, grad


def _bt_obj_grad(theta, h, a, w, penalty):
    n = len(theta) - 1
    beta, alpha = theta[:n], theta[n]
    eta = beta[h] - beta[a] + alpha
    # log pi = -log(1 + e^-eta), log(1-pi) = -log(1 + e^eta)
    loglik = -(w * np.logaddexp(0.0, -eta) + (1.0 - w) * np.logaddexp(0.0, eta)).sum()
    obj = loglik - 0.5 * penalty * (beta @ beta + alpha * alpha)
    pi = 1.0 / (1.0 + np.exp(-eta))
    r = w - pi
    g_beta = np.bincount(h, weights=r, minlength=n) - np.bincount(a, weights=r, minlength=n)
    grad = np.append(g_beta - penalty * beta, r.sum() - penalty * alpha)
    return obj, grad


def _bt_hessian(theta, h, a, penalty):
    """Negated Hessian of the penalized log-likelihood (positive definite)."""
    n = len(theta) - 1
    beta, alpha = theta[:n], theta[n]
    eta = beta[h] - beta[a] + alpha
    pi = 1.0 / (1.0 + np.exp(-eta))
    wt = pi * (1.0 - pi)
    H = np.zeros((n + 1, n + 1))
    dh = np.bincount(h, weights=wt, minlength=n)
    da = np.bincount(a, weights=wt, minlength=n)
    H[np.arange(n), np.arange(n)] = dh + da
    np.subtract.at(H, (h, a), wt)
    np.subtract.at(H, (a, h), wt)
    H[:n, n] = dh - da
    H[n, :n] = H[:n, n]
    H[n, n] = wt.sum()
    H[np.arange(n + 1), np.arange(n + 1)] += penalty
    return H


def fit_bt(train: Sequence[Game], teams, penalty: float = DEFAULT_PENALTY,
           tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> BtFit:
    """Maximize the ridge-penalized Bradley-Terry likelihood.

    Tied games carry no win/loss information and are skipped. Teams in
    ``teams`` that never appear in ``train`` get strength exactly 0 (the
    penalty's center). Raises FitError if the gradient norm does not
    reach ``tol`` within ``max_iter`` Newton iterations.
    """
    order = _check_train(train, teams)
    if penalty <= 0:
        raise ValueError("penalty must be positive")
    decisive = [g for g in train if g.margin != 0]
    if not decisive:
        raise FitError("training set has no decisive (non-tied) games")

    seen = sorted({t for g in decisive for t in (g.home, g.away)})
    index = {t: i for i, t in enumerate(seen)}
    n = len(seen)
    h, a = _game_arrays(decisive, index)
    w = np.array([g.home_win for g in decisive], dtype=float)

    theta = np.zeros(n + 1)
    obj, grad = _bt_obj_grad(theta, h, a, w, penalty)
    gnorm = float(np.linalg.norm(grad))
    iterations = 0
    while gnorm > tol and iterations < max_iter:
        H = _bt_hessian(theta, h, a, penalty)
        step = np.linalg.solve(H, grad)
        # Newton steps from a centered iterate stay centered; re-center
        # anyway to shed float drift. A step counts as progress if it
        # raises the objective or, once objective changes fall below
        # float resolution near the optimum, shrinks the gradient.
        scale = 1.0
        while scale > 1e-12:
            cand = theta + scale * step
            cand[:n] -= cand[:n].mean()
            cand_obj, cand_grad = _bt_obj_grad(cand, h, a, w, penalty)
            cand_gnorm = float(np.linalg.norm(cand_grad))
            if cand_obj > obj or cand_gnorm < gnorm:
                theta, obj, grad, gnorm = cand, cand_obj, cand_grad, cand_gnorm
                break
            scale *= 0.5
        else:
            break  # no progress possible; gradient check below decides
        iterations += 1

    if gnorm > tol:
        raise FitError(
            f"Newton did not converge in {iterations} iterations "
            f"(gradient norm {gnorm:.3e} > tol {tol:.1e})",
            iterations=iterations,
            gradient_norm=gnorm,
        )

    strengths = {t: 0.0 for t in order}
    for t, i in index.items():
        strengths[t] = float(theta[i])
    return BtFit(
        strengths=strengths,
        home_adv=float(theta[n]),
        penalty=penalty,
        converged=True,
        iterations=iterations,
        final_gradient_norm=gnorm,
    )


def fit_mov(train: Sequence[Game], teams, penalty: float = DEFAULT_PENALTY) -> MovFit:
    """Penalized least squares for the margin model, in closed form.

    Ties are legitimate observations here (margin 0). The ridge penalty
    applies to team strengths only, not the home advantage; with any
    positive penalty the normal equations are full rank.
    """
    order = _check_train(train, teams)
    if penalty < 0:
        raise ValueError("penalty must be non-negative")

    seen = sorted({t for g in train for t in (g.home, g.away)})
    index = {t: i for i, t in enumerate(seen)}
    n = len(seen)
    h, a = _game_arrays(train, index)
    y = np.array([g.margin for g in train], dtype=float)
    m = len(train)

    # Reduced coordinates: strengths of the first n-1 seen teams plus the
    # home advantage; the last seen team's strength is the negated sum.
    d = n  # n-1 strengths + 1 home advantage
    X = np.zeros((m, d))
    rows = np.arange(m)
    last = n - 1
    small_h = h != last
    X[rows[small_h], h[small_h]] += 1.0
    X[rows[~small_h], :last] -= 1.0
    small_a = a != last
    X[rows[small_a], a[small_a]] -= 1.0
    X[rows[~small_a], :last] += 1.0
    X[:, -1] = 1.0

    # penalty * sum(delta_i^2) in reduced coordinates is I + ones*ones^T
    P = np.zeros((d, d))
    P[:last, :last] = penalty * (np.eye(last) + np.ones((last, last)))
    A = X.T @ X + P
    b = X.T @ y
    try:
        coef = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        coef = np.linalg.lstsq(A, b, rcond=None)[0]

    delta = np.append(coef[:last], -coef[:last].sum())
    lam = float(coef[-1])
    resid = y - (X @ coef)
    residual_sd = float(np.sqrt((resid @ resid) / m))

    strengths = {t: 0.0 for t in order}
    for t, i in index.items():
        strengths[t] = float(delta[i])
    return MovFit(strengths=strengths, home_adv=lam, penalty=penalty,
                  residual_sd=residual_sd)


def predict_bt(fit: BtFit, game: Game) -> float:
    """Home-team win probability; unseen teams count as strength 0."""
    eta = fit.strengths.get(game.home, 0.0) - fit.strengths.get(game.away, 0.0) + fit.home_adv
    return 1.0 / (1.0 + math.exp(-eta))


def predict_mov(fit: MovFit, game: Game) -> float:
    """Expected home margin; unseen teams count as strength 0."""
    return fit.strengths.get(game.home, 0.0) - fit.strengths.get(game.away, 0.0) + fit.home_adv


def bt_predicts_home_win(pi: float) -> bool:
    """Decision rule for the win/loss model; exactly 0.5 picks the road team."""
    return pi > 0.5


def mov_predicts_home_win(mu: float) -> bool:
    """Decision rule for the margin model; exactly 0 picks the road team."""
    return mu > 0.0


def info_metric(predictions: Iterable[tuple[bool, int]]) -> float:
    """Fraction of games whose outcome the model called correctly.

    Each item pairs the binary home-win prediction with the actual
    outcome as the sign of the home margin (+1 win, 0 tie, -1 loss).
    Ties earn 0.5 credit no matter what was predicted, so both models
    stay comparable on identical test sets.
    """
    total = 0.0
    count = 0
    for predicted_home_win, outcome in predictions:
        if outcome not in (-1, 0, 1):
            raise ValueError(f"outcome must be -1, 0, or +1, got {outcome!r}")
        if outcome == 0:
            total += 0.5
        elif (outcome > 0) == bool(predicted_home_win):
            total += 1.0
        count += 1
    if count == 0:
        raise ValueError("no predictions to score")
    return total / count
