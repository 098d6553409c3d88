"""Parameter tree of one endpoint."""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

SCALAR_TYPES = ("string", "number", "integer", "boolean")
DATA_TYPES = SCALAR_TYPES + ("array", "object")


@dataclass
class ParameterSpec:
    """One request parameter and its sub-parameters."""

    name: str
    path: str
    data_type: str
    required: bool = False
    enum_values: List[Any] = field(default_factory=list)
    description: str = ""
    children: List["ParameterSpec"] = field(default_factory=list)
    item_type: Optional[str] = None
    item_enum_values: List[Any] = field(default_factory=list)

    @property
    def parent_path(self) -> Optional[str]:
        head, _, _ = self.path.rpartition(".")
        return head or None

    @property
    def is_container(self) -> bool:
        return self.data_type == "object" or (self.data_type == "array" and self.item_type == "object")

    def walk(self) -> Iterator["ParameterSpec"]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class EndpointSpec:
    """An endpoint: path, verb and its request parameter tree."""

    endpoint_path: str
    method: str = "POST"
    parameters: List[ParameterSpec] = field(default_factory=list)
    flat_index: Dict[str, ParameterSpec] = field(default_factory=dict)

    def walk(self) -> Iterator[ParameterSpec]:
        for parameter in self.parameters:
            yield from parameter.walk()

    def paths(self) -> Tuple[str, ...]:
        return tuple(self.flat_index)

    def get(self, path: str) -> Optional[ParameterSpec]:
        return self.flat_index.get(path)

    def __contains__(self, path: str) -> bool:
        return path in self.flat_index

    def __len__(self) -> int:
        return len(self.flat_index)

    def summary(self) -> Dict[str, Any]:
        return {
            "endpoint": self.endpoint_path,
            "method": self.method,
            "top_level": len(self.parameters),
            "total": len(self.flat_index),
        }
