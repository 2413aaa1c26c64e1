"""scikit-learn style front end.

The certifiers learn nothing: ``fit`` only validates the tolerance
parameters and freezes them into a :class:`~statecert.linalg.ToleranceConfig`.
They exist so certification composes with sklearn tooling
(``get_params``/``set_params``, ``clone``, ``score`` against known labels).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_matrix_batch
from .criteria import ALL_CRITERIA, DEFAULT_N_MAX, StateVerdict, run_all
from .linalg import ToleranceConfig
from .phase_space import (
    DEFAULT_M_MAX,
    PHASE_CRITERIA,
    PHASE_POSITIVITY,
    PHASE_TOLERANCES,
    W_PURE,
    WignerGrid,
    run_phase_criteria,
)

_DEFAULTS = ToleranceConfig()


class _CertifierBase(ClassifierMixin, BaseEstimator):
    def _make_config(self) -> ToleranceConfig:
        return ToleranceConfig(
            hermiticity_tol=self.hermiticity_tol,
            sum_tol=self.sum_tol,
            series_tol=self.series_tol,
            max_terms=self.max_terms,
            divergence_threshold=self.divergence_threshold,
        )

    def fit(self, X=None, y=None):
        """Validate parameters; ``X`` and ``y`` are accepted for API
        compatibility and only checked for shape."""
        self.config_ = self._make_config()
        if self.criteria is not None:
            unknown = set(self.criteria) - set(self._known_criteria)
            if unknown:
                raise ValueError(f"unknown criteria: {sorted(unknown)}")
        if X is not None:
            self._validate(X)
        self.classes_ = np.array([False, True])
        return self


class DensityMatrixCertifier(_CertifierBase):
    """Classify matrices as density matrices (``True``) or not.

    Parameters
    ----------
    criteria : sequence of str, optional
        Criterion identifiers to run; all by default.
    hermiticity_tol, sum_tol, series_tol, max_terms, divergence_threshold
        See :class:`~statecert.linalg.ToleranceConfig`.
    n_max : int
        Horizon of the binomial-sum criterion.

    Examples
    --------
    >>> import numpy as np
    >>> clf = DensityMatrixCertifier().fit()
    >>> clf.predict([np.diag([0.5, 0.5]), np.diag([2/3, 2/3, -1/3])]).tolist()
    [True, False]
    """

    _known_criteria = ALL_CRITERIA

    def __init__(self, criteria=None, hermiticity_tol=_DEFAULTS.hermiticity_tol,
                 sum_tol=_DEFAULTS.sum_tol, series_tol=_DEFAULTS.series_tol,
                 max_terms=_DEFAULTS.max_terms,
                 divergence_threshold=_DEFAULTS.divergence_threshold,
                 n_max=DEFAULT_N_MAX):
        self.criteria = criteria
        self.hermiticity_tol = hermiticity_tol
        self.sum_tol = sum_tol
        self.series_tol = series_tol
        self.max_terms = max_terms
        self.divergence_threshold = divergence_threshold
        self.n_max = n_max

    def _validate(self, X):
        return check_matrix_batch(X)

    def certify(self, X) -> list[StateVerdict]:
        """Full verdicts (per-criterion reports included) for each matrix."""
        check_is_fitted(self, "config_")
        return [run_all(m, self.config_, self.n_max, self.criteria) for m in self._validate(X)]

    def predict(self, X) -> np.ndarray:
        return np.array([v.is_state for v in self.certify(X)], dtype=bool)

    def predict_purity(self, X) -> np.ndarray:
        """``True`` for pure states; ``False`` when purity is refuted or was not tested."""
        return np.array([bool(v.is_pure) for v in self.certify(X)], dtype=bool)


def _check_wigner_batch(X) -> list[WignerGrid]:
    items = [X] if isinstance(X, WignerGrid) else list(X)
    if not items:
        raise ValueError("X is empty")
    for i, w in enumerate(items):
        if not isinstance(w, WignerGrid):
            raise TypeError(f"X[{i}] is {type(w).__name__}, expected WignerGrid")
    return items


class WignerCertifier(_CertifierBase):
    """Classify grid-sampled phase-space functions as Wigner functions.

    Defaults to the grid tolerances in
    :data:`~statecert.phase_space.PHASE_TOLERANCES`.
    """

    _known_criteria = PHASE_CRITERIA

    def __init__(self, criteria=None, hermiticity_tol=PHASE_TOLERANCES.hermiticity_tol,
                 sum_tol=PHASE_TOLERANCES.sum_tol, series_tol=PHASE_TOLERANCES.series_tol,
                 max_terms=PHASE_TOLERANCES.max_terms,
                 divergence_threshold=PHASE_TOLERANCES.divergence_threshold,
                 m_max=DEFAULT_M_MAX):
        self.criteria = criteria
        self.hermiticity_tol = hermiticity_tol
        self.sum_tol = sum_tol
        self.series_tol = series_tol
        self.max_terms = max_terms
        self.divergence_threshold = divergence_threshold
        self.m_max = m_max

    def _validate(self, X):
        return _check_wigner_batch(X)

    def certify(self, X) -> list[dict]:
        check_is_fitted(self, "config_")
        return [run_phase_criteria(w, self.config_, self.m_max, self.criteria)
                for w in self._validate(X)]

    def predict(self, X) -> np.ndarray:
        out = []
        for reports in self.certify(X):
            verdicts = [r.verdict for k, r in reports.items() if k in PHASE_POSITIVITY]
            if not verdicts and W_PURE in reports:
                verdicts = [reports[W_PURE].verdict]
            out.append("accept" in verdicts and "reject" not in verdicts)
        return np.array(out, dtype=bool)
