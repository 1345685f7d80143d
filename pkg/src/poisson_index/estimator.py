"""scikit-learn style front end.

``PoissonRateComparison().fit([[k1, n1], [k2, n2]])`` computes both gamma
posteriors, the index report and the conditional-test p-value for the
configured prior(s), threshold and direction.  ``transform`` maps rows of
``[k1, n1, k2, n2]`` to ``[theta, p_value]`` with the same settings.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_arms, check_pairs, check_prior
from .conditional_test import p_value
from .index import ComparisonQuery, index
from .model import Observation, posterior


class PoissonRateComparison(TransformerMixin, BaseEstimator):
    """Bayesian index and conditional test for two Poisson rates.

    Parameters
    ----------
    prior1 : str or prior object, default="noninformative"
        Prior for the first rate; strings use the CLI syntax
        (``noninformative``, ``jeffreys``, ``gamma:A,B``, ``power:X0,M,A``).
    prior2 : str or prior object, optional
        Prior for the second rate; defaults to ``prior1``.
    threshold : float, default=1.0
        The ratio ``c`` in ``P(lam1 / lam2 < c)``.
    direction : {"less", "greater"}, default="less"

    Attributes
    ----------
    posterior1_, posterior2_ : GammaPosterior
    report_ : IndexReport
    theta_ : float
    test_result_ : TestResult
    p_value_ : float
    """

    def __init__(self, prior1="noninformative", prior2=None, threshold=1.0, direction="less"):
        self.prior1 = prior1
        self.prior2 = prior2
        self.threshold = threshold
        self.direction = direction

    def _settings(self):
        prior1 = check_prior(self.prior1)
        prior2 = prior1 if self.prior2 is None else check_prior(self.prior2)
        return prior1, prior2, ComparisonQuery(self.direction, self.threshold)

    def fit(self, X, y=None):
        X = check_arms(X)
        prior1, prior2, query = self._settings()
        obs1 = Observation(int(X[0, 0]), float(X[0, 1]))
        obs2 = Observation(int(X[1, 0]), float(X[1, 1]))
        self.posterior1_ = posterior(prior1, obs1)
        self.posterior2_ = posterior(prior2, obs2)
        self.report_ = index(self.posterior1_, self.posterior2_, query)
        self.theta_ = self.report_.theta
        self.test_result_ = p_value(obs1, obs2, query)
        self.p_value_ = self.test_result_.p_value
        return self

    def transform(self, X):
        X = check_pairs(X)
        prior1, prior2, query = self._settings()
        out = np.empty((X.shape[0], 2))
        for i, (k1, n1, k2, n2) in enumerate(X):
            obs1 = Observation(int(k1), float(n1))
            obs2 = Observation(int(k2), float(n2))
            report = index(posterior(prior1, obs1), posterior(prior2, obs2), query)
            out[i] = report.theta, p_value(obs1, obs2, query).p_value
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array(["theta", "p_value"], dtype=object)
