from . import errors
from . import utils
from . import heatmaps
from . import decoding
from . import losses
from . import gradients
from . import sim
from . import theory
from . import metrics
from . import config
from . import experiments
