# paramark/core/config.py
from typing import Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # External NRA solver (also set via --solver)
    SOLVER: Optional[str] = None
    SOLVER_TIMEOUT: int = 60

    # Polynomial / elimination limits
    EXPONENT_LIMIT: int = 2 ** 20
    ELIMINATION_TERM_LIMIT: int = 20000

    # Enumeration caps
    WD_PARAM_CAP: int = 12
    SELF_CHECK: bool = False
    SELF_CHECK_STATES: int = 12

    # Oracle grids
    GRID_RESOLUTION: int = 20
    PROPERTY_GRID: int = 5

    LOG_LEVEL: str = "WARNING"

    class Config:
        env_prefix = "PARAMARK_"
        env_file = ".env"


settings = Settings()
