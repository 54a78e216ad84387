from .config import ConfigError, NodeConfig, load_config
from .runtime import ChainGapError, Node
from .cluster import BusTransport, LocalCluster
from .api import build_app
from .transport import HttpTransport
