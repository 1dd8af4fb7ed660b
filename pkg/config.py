import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None


class Config:
    """Base configuration."""
    # Largest digraph accepted anywhere (neighbor sets are int bitmasks)
    COMPGRAPH_MAX_N = _env_int('COMPGRAPH_MAX_N', 64)

    # Search limits
    SEARCH_MAX_SUM = _env_int('SEARCH_MAX_SUM', 13)
    SEARCH_WORKERS = _env_int('SEARCH_WORKERS', 1)
    ENUMERATE_MAX_ARCS = _env_int('ENUMERATE_MAX_ARCS', 28)

    # minimal_total gives up past this many vertices (k=2 never succeeds)
    MINIMAL_TOTAL_SCAN_LIMIT = _env_int('MINIMAL_TOTAL_SCAN_LIMIT', 40)

    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')


class DevelopmentConfig(Config):
    DEBUG = True


class ProductionConfig(Config):
    DEBUG = False


class TestingConfig(Config):
    TESTING = True
    DEBUG = False
    LOG_LEVEL = 'WARNING'


# Dictionary to help select environment based config
config_by_name = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}


def get_config(name: str | None = None) -> type[Config]:
    """Return the config class for `name`, or the one selected by COMPGRAPH_ENV."""
    name = name or os.environ.get('COMPGRAPH_ENV', 'default')
    try:
        return config_by_name[name]
    except KeyError:
        raise ValueError(f"unknown configuration {name!r}; expected one of {sorted(config_by_name)}") from None
