"""predacc: paired R-squared / L-squared prediction accuracy measures.

R-squared measures how much response variation a prediction function
explains after an affine recalibration; L-squared measures how close the
raw predictions already are to that recalibrated version.  Both extend
to right-censored data through inverse-probability-of-censoring
weighting, with Cox and parametric AFT fitters supplying prediction
functions, bootstrap intervals, and a simulation harness for the
operating-characteristic tables.
"""

__version__ = "0.1.0"

from .samples import (  # noqa: E402,F401
    CompleteSample,
    CensoredSample,
    PredictionVector,
    validate_complete,
    validate_censored,
    censoring_rate,
)
from .censoring import (  # noqa: F401
    StepSurvival,
    WeightVector,
    fit_censoring_km,
    left_limit,
    ipcw_weights,
    ipcw_weights_covariate,
    fit_censoring_cox,
    uniform_weights,
)
from .measures import (  # noqa: F401
    CorrectedPredictor,
    AccuracyReport,
    corrected_predictor,
    accuracy_complete,
    accuracy_censored,
    decomposition_check,
    squared_correlation,
)
from .linear import OlsFit, fit_ols  # noqa: F401
from .cox import (  # noqa: F401
    CoxFit,
    BreslowBaseline,
    fit_cox,
    breslow_baseline,
    cox_predict,
)
from .aft import AftFit, fit_aft, aft_predict  # noqa: F401
from .bootstrap import BootstrapResult, bootstrap_accuracy  # noqa: F401
from .pipeline import evaluate_sample, fit_and_predict  # noqa: F401
from .simulation import (  # noqa: F401
    IndependentCensoring,
    DependentCensoring,
    CoxWeibullDesign,
    AftWeibullDesign,
    PopulationEstimate,
    ScenarioResult,
    CellResult,
    gen_cox_weibull,
    gen_aft_weibull,
    calibrate_censoring,
    approx_population,
    run_scenario,
)
from . import errors  # noqa: F401
