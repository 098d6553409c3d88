"""Lexically scoped variable stack and duplicate-name resolution."""

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from ..frontend.nodes import TypeRef
from ..frontend.program import Program
from .values import AbstractValue


@dataclass
class Binding:
    value: AbstractValue
    type: Optional[TypeRef] = None
    # guards the latest write happened under
    written_under: Tuple = ()

    def visible_under(self, guards: Sequence) -> bool:
        """True when the latest write is on every path to a node with ``guards``."""
        return tuple(guards[: len(self.written_under)]) == tuple(self.written_under)


@dataclass
class _Scope:
    key: Optional[Hashable]
    bindings: Dict[str, Binding] = field(default_factory=dict)


class VariableStack:
    """One frame per analyzed call, a list of scopes per frame.

    Lookups only see the innermost frame. ``recency`` lists accessed
    parameter paths, most recent last.
    """

    def __init__(self):
        self._frames: List[List[_Scope]] = [[_Scope(None)]]
        self.recency: List[str] = []

    # frames and scopes

    def push_frame(self) -> None:
        self._frames.append([_Scope(None)])

    def pop_frame(self) -> None:
        if len(self._frames) == 1:
            raise RuntimeError("cannot pop the outermost frame")
        self._frames.pop()

    @property
    def depth(self) -> int:
        return len(self._frames)

    @property
    def _scopes(self) -> List[_Scope]:
        return self._frames[-1]

    def push_scope(self, key: Optional[Hashable] = None) -> None:
        self._scopes.append(_Scope(key))

    def pop_scope(self) -> None:
        if len(self._scopes) == 1:
            raise RuntimeError("cannot pop the frame's base scope")
        self._scopes.pop()

    def scope_keys(self) -> Tuple:
        return tuple(scope.key for scope in self._scopes[1:])

    def sync(self, keys: Sequence[Hashable]) -> None:
        """Pop and push scopes until the open scopes are exactly ``keys``."""
        current = self.scope_keys()
        common = 0
        while common < min(len(current), len(keys)) and current[common] == keys[common]:
            common += 1
        for _ in range(len(current) - common):
            self.pop_scope()
        for key in keys[common:]:
            self.push_scope(key)

    # bindings

    def declare(self, name: str, value: AbstractValue, type_ref: Optional[TypeRef] = None, guards: Tuple = ()) -> None:
        self._scopes[-1].bindings[name] = Binding(value, type_ref, tuple(guards))

    def lookup(self, name: str) -> Optional[Binding]:
        for scope in reversed(self._scopes):
            if name in scope.bindings:
                return scope.bindings[name]
        return None

    def assign(self, name: str, value: AbstractValue, guards: Tuple = ()) -> bool:
        """Overwrite the innermost binding of ``name``; False if it is not a variable."""
        binding = self.lookup(name)
        if binding is None:
            return False
        binding.value = value
        binding.written_under = tuple(guards)
        return True

    def value(self, name: str) -> Optional[AbstractValue]:
        binding = self.lookup(name)
        return binding.value if binding else None

    # recency

    def touch(self, path: str) -> None:
        if path:
            self.recency.append(path)

    def most_recent(self) -> Optional[str]:
        return self.recency[-1] if self.recency else None

    def snapshot(self) -> Tuple:
        return tuple(
            tuple((scope.key, tuple(sorted((k, repr(b)) for k, b in scope.bindings.items()))) for scope in frame)
            for frame in self._frames
        )


@dataclass(frozen=True)
class Resolution:
    path: str
    ambiguous: bool = False
    candidates: Tuple[str, ...] = ()


def _shared_segments(a: str, b: str) -> int:
    count = 0
    for left, right in zip(a.split("."), b.split(".")):
        if left != right:
            break
        count += 1
    return count


def resolve_param_ref(
    field_name: str, stack: VariableStack, program: Program, model: Optional[str] = None
) -> Optional[Resolution]:
    """Parameter path of ``field_name`` when the receiver is not a tracked parameter.

    Several candidates are narrowed by the most recently accessed parameter:
    the candidate sharing the longest prefix with it wins. Ties, or no
    recent access at all, fall back to the shortest path and are flagged.
    """
    candidates: List[str] = []
    if model is not None:
        candidates = program.model_field_paths(model, field_name)
    if not candidates:
        candidates = list(program.field_paths.get(field_name, []))
    if not candidates:
        return None
    if len(candidates) == 1:
        return Resolution(candidates[0], False, tuple(candidates))

    def shortest(paths: Sequence[str]) -> str:
        return min(paths, key=lambda p: (p.count("."), p))

    recent = stack.most_recent()
    if recent is None:
        return Resolution(shortest(candidates), True, tuple(candidates))
    scores = {path: _shared_segments(path, recent) for path in candidates}
    best = max(scores.values())
    leaders = [path for path in candidates if scores[path] == best]
    return Resolution(shortest(leaders), len(leaders) > 1, tuple(candidates))
