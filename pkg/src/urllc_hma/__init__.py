"""Single-cell URLLC simulator: hybrid OMA/NOMA slicing with Q-learning RRM."""
from .channel import ChannelParams, LinkBudget, Position, mean_snr, noise_power_dbm, path_loss_db
from .engine import Engine, Metrics, SimConfig, run, run_replications
from .kernels import BACKEND
from .outage import (OutageEstimate, PowerSplit, eps_outage_rate, multi_rrb_outage_exact,
                     multi_rrb_outage_mc, rayleigh_outage, shannon_rate)
from .slicing import InterferenceCap, Mode, SliceConfig, check_interference_cap, make_mode

__version__ = "0.1.0"
