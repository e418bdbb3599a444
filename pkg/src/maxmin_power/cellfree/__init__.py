"""Cell-free massive MIMO uplink/downlink simulator producing max-min instances."""

from .channels import (
    ChannelStatistics,
    csi_view,
    dbm_to_mw,
    db2lin,
    draw_channels,
    lin2db,
    make_statistics,
    mw_to_dbm,
    noise_power,
    pathloss_db,
    pathloss_gains,
    sample_channels,
    select_clusters,
    shadowing_correlation,
)
from .combiners import (
    centralized_combiners,
    lmmse_combiners,
    ltmmse_combiners,
    team_coefficients,
    team_statistics,
)
from .effective import (
    REGIMES,
    EffectiveChannel,
    build_dl_problem,
    build_ul_problem,
    estimate_effective_channel,
    sinr_dl,
    sinr_ul,
)
from .geometry import NetworkGeometry, make_geometry
from .scenario import (
    PROFILES,
    ScenarioConfig,
    effective_channel,
    load_scenario,
    make_setup,
    simulate_setup,
)
