"""
Run manifests written next to every CLI output artifact
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)


@dataclass
class RunManifest:
    """Parameters needed to reproduce a CLI run; only wall time varies between reruns"""

    subcommand: str
    parameters: Dict[str, Any]
    seed: Optional[int]
    version: str
    wall_time_seconds: float = 0.0
    outputs: List[str] = field(default_factory=list)
    exit_code: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunManifest":
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def write(self, path: str) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(self.to_json())
        logger.debug(f"Manifest written to {target}")
        return target
