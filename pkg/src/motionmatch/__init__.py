"""Probabilistic selection engine for motion-correlation interfaces."""

__version__ = "0.1.0"

from .trajectory import (  # noqa: F401
    DistortionModel,
    NullBehaviorModel,
    Point2,
    Trajectory,
    Window,
    derivative,
    distort,
    gen_circle,
    gen_null_behavior,
    gen_polygon,
    rotate_window,
    window_at,
)
from .similarity import (  # noqa: F401
    InvarianceFlags,
    Measure,
    SimilarityScore,
    VarianceComponents,
    invariance_flags,
    score,
)
from .inference import (  # noqa: F401
    BeliefState,
    Decision,
    EmpiricalPdf,
    LikelihoodModel,
    WmsConfig,
    bayes_update,
    decide,
    entropy,
    fit_kde,
    likelihood,
    run_pipeline,
    uniform_belief,
    wms_update,
)
