"""
Size reports emitted by every compiler.
"""
from dataclasses import asdict, dataclass
from typing import Any, Dict


@dataclass(frozen=True)
class CompileReport:
    """Sizes before and after one compilation."""
    compiler: str
    source_size: int
    target_size: int
    registers: int
    spare_registers: int

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)
