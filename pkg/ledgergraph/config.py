"""Configuration and constants for ledgergraph."""

# Network size limit (nodes in both partitions)
NODE_CAP: int = 100_000

# Tail fitting
SIGNIFICANCE: float = 0.1
MIN_TAIL: int = 10
MIN_ALPHA: float = 1.000001
MAX_ALPHA: float = 20.0
ALPHA_TOLERANCE: float = 1e-10

# Network JSON
SCHEMA_VERSION: str = "fsn/1"

# Journal CSV
DEFAULT_COLUMNS: dict[str, str] = {
    "company_id": "company_id",
    "entry_id": "entry_id",
    "date": "date",
    "account_id": "account_id",
    "account_name": "account_name",
    "amount": "amount",
    "side": "side",
}
REQUIRED_COLUMNS: tuple[str, ...] = ("entry_id", "date", "account_id", "amount", "side")
DEBIT_TOKENS: tuple[str, ...] = ("d",)
CREDIT_TOKENS: tuple[str, ...] = ("c",)

# Graph sweeps
SWEEP_CHUNK_SIZE: int = 64
LENGTH_WEIGHTED_MAX_NODES: int = 1_000
WORKERS_ENV: str = "LEDGERGRAPH_WORKERS"

# Reports
TOP_K: int = 10
HIST_BINS: int = 20
INDUSTRY_LABELS: tuple[str, ...] = ("CRS", "HLP", "LE", "PF", "RTL")
UNMAPPED_INDUSTRY: str = "unmapped"

# Color scheme for diagnostics
COLORS: dict[str, str] = {
    "DEBUG": "bright_black",
    "INFO": "cyan",
    "WARNING": "yellow",
    "ERROR": "red",
    "CRITICAL": "red",
}
