"""growthlab: universal, best-in-hindsight and log-optimal portfolios on
simulated ergodic markets and observed price data, with cross-validated
growth-rate estimators.
"""

from .simplex import (
    MarketPath,
    PortfolioWeights,
    RefiningPartition,
    SimplexPoint,
    make_simplex_point,
    path_from_csv,
    path_to_csv,
    project_to_margin,
    quadratic_variation,
)
from .markets import (
    DiffusionSpec,
    InvariantSample,
    MarkovKernel,
    euler_kernel,
    identity_kernel,
    invariant_sample,
    simulate_diffusion,
    simulate_discrete,
    wright_fisher,
    zero_dynamics,
)
from .portfolios import (
    GeneratorFunction,
    LipschitzGridMap,
    MixtureMeasure,
    PortfolioMapSpec,
    certify_generator,
    certify_lipschitz,
    constant_map,
    evaluate,
    fg_map,
    fg_weights,
    generator,
    lipschitz_map,
    market_map,
    sample_mixture,
    simplex_grid,
    table_map,
)
from .wealth import (
    WealthCurve,
    universal_weights_at,
    wealth_diffusion_exponential,
    wealth_discrete,
    wealth_master_equation,
    wealth_to_csv,
    wealth_universal,
)
from .optimize import (
    LogOptimalTable,
    RetroResult,
    best_constant,
    best_generator,
    best_lipschitz,
    log_optimal_map,
    log_optimal_state,
    numeraire_map,
    numeraire_weights,
)
from .asymptotics import (
    GrowthRateReport,
    batch_means_se,
    check_cover_gap,
    check_martingale_clt_premise,
    check_supermartingale,
    compare_three,
    compare_three_continuous,
    growth_time_average,
    l_num_quadrature,
    l_pi_diffusion,
    l_pi_discrete,
    l_quadrature,
)
from .benchmarks import alternating_path, bounded_ratio_path
from .cli import PriceSeries, RunConfig, ingest_prices

__version__ = "0.1.0"
