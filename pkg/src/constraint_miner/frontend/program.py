"""Resolved program model: classes, controllers and request-model parameter paths."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from ..config.files import AnalysisConfig
from ..exceptions import ResolutionError
from ..utils.logger import get_logger
from .nodes import ClassDecl, CompilationUnit, EnumDecl, FieldDecl, MethodDecl, TypeRef
from .parser import parse_file

logger = get_logger(__name__)

ACCESSOR_PREFIXES = ("get", "is")
SOURCE_SUFFIX = ".mj"


@dataclass(frozen=True, order=True)
class MethodRef:
    class_name: str
    method_name: str

    @classmethod
    def parse(cls, text: str) -> "MethodRef":
        class_name, _, method_name = text.partition(".")
        return cls(class_name, method_name)

    def __str__(self) -> str:
        return f"{self.class_name}.{self.method_name}"


@dataclass
class ClassInfo:
    decl: ClassDecl
    filename: str
    fields: Dict[str, FieldDecl] = field(default_factory=dict)
    methods: Dict[str, MethodDecl] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.decl.name


@dataclass
class Program:
    """Classes of all units plus the request-model to parameter-path mapping."""

    classes: Dict[str, ClassInfo]
    enums: Dict[str, EnumDecl]
    controllers: List[MethodRef]
    request_models: Tuple[str, ...]
    root_model: str
    model_prefixes: Dict[str, List[str]] = field(default_factory=dict)
    field_paths: Dict[str, List[str]] = field(default_factory=dict)
    path_types: Dict[str, TypeRef] = field(default_factory=dict)
    common_methods: Dict[str, str] = field(default_factory=dict)
    invalid_state_patterns: Tuple[str, ...] = ("addError",)
    max_depth: int = 15

    # lookups

    def method(self, ref: MethodRef) -> Optional[MethodDecl]:
        info = self.classes.get(ref.class_name)
        return info.methods.get(ref.method_name) if info else None

    def filename(self, class_name: str) -> str:
        info = self.classes.get(class_name)
        return info.filename if info else "<unknown>"

    def is_model(self, type_name: Optional[str]) -> bool:
        return type_name in self.request_models

    def class_field(self, class_name: str, name: str) -> Optional[FieldDecl]:
        seen: Set[str] = set()
        info = self.classes.get(class_name)
        while info is not None and info.name not in seen:
            seen.add(info.name)
            if name in info.fields:
                return info.fields[name]
            superclass = info.decl.superclass
            info = self.classes.get(superclass.name) if superclass else None
        return None

    def accessor_field(self, class_name: str, method_name: str) -> Optional[str]:
        """Field read by ``method_name`` under the getter naming convention."""
        for prefix in ACCESSOR_PREFIXES:
            if method_name.startswith(prefix) and len(method_name) > len(prefix):
                rest = method_name[len(prefix):]
                if not rest[0].isupper():
                    continue
                name = rest[0].lower() + rest[1:]
                if self.class_field(class_name, name) is not None:
                    return name
        return None

    def child_path(self, parent: str, name: str) -> str:
        return f"{parent}.{name}" if parent else name

    def model_field_paths(self, model: str, name: str) -> List[str]:
        """Parameter paths of field ``name`` of request model ``model`` across all its uses."""
        prefixes = self.model_prefixes.get(model, [])
        return [self.child_path(prefix, name) for prefix in prefixes if self.child_path(prefix, name) in self.path_types]

    def enum_constant(self, name: str) -> Optional[str]:
        """Enum type declaring ``name``, when exactly one does."""
        owners = [enum.name for enum in self.enums.values() if name in enum.constants]
        return owners[0] if len(owners) == 1 else None

    def methods_named(self, name: str) -> List[MethodRef]:
        return [MethodRef(info.name, name) for info in self.classes.values() if name in info.methods]

    def all_paths(self) -> List[str]:
        return sorted(self.path_types)


def _index_class(decl: ClassDecl, filename: str) -> ClassInfo:
    info = ClassInfo(decl=decl, filename=filename)
    for declared in decl.fields:
        info.fields[declared.name] = declared
    for method in decl.methods:
        if method.name in info.methods:
            raise ResolutionError(
                f"{filename}:{method.span}: ambiguous overload {decl.name}.{method.name} (overloads are not supported)"
            )
        info.methods[method.name] = method
    return info


def _model_type(type_ref: TypeRef, models: Sequence[str]) -> Tuple[Optional[str], bool]:
    """Model class held by a field type and whether it is a collection of it."""
    if type_ref.name in models and not type_ref.dims:
        return type_ref.name, False
    element = type_ref.element
    if element is not None and element.name in models:
        return element.name, True
    return None, False


def _map_models(program: Program) -> None:
    models = program.request_models

    def visit(model: str, prefix: str, stack: Tuple[str, ...]) -> None:
        program.model_prefixes.setdefault(model, []).append(prefix)
        info = program.classes[model]
        for name, declared in info.fields.items():
            if declared.is_static:
                continue
            path = program.child_path(prefix, name)
            program.path_types[path] = declared.type
            program.field_paths.setdefault(name, []).append(path)
            nested, _ = _model_type(declared.type, models)
            if nested is not None:
                if nested in stack:
                    logger.warning(f"Recursive request model {nested} at {path}; not expanded further")
                    continue
                visit(nested, path, stack + (nested,))

    visit(program.root_model, "", (program.root_model,))


def resolve_program(units: Iterable[CompilationUnit], config: AnalysisConfig) -> Program:
    """Link the parsed units into a Program described by ``config``."""
    classes: Dict[str, ClassInfo] = {}
    enums: Dict[str, EnumDecl] = {}
    for unit in units:
        for decl in unit.classes:
            if decl.name in classes:
                raise ResolutionError(f"class {decl.name} defined in {classes[decl.name].filename} and {unit.filename}")
            classes[decl.name] = _index_class(decl, unit.filename)
        for enum in unit.enums:
            enums[enum.name] = enum

    controllers = [MethodRef.parse(name) for name in config.controllers]
    for ref in controllers:
        info = classes.get(ref.class_name)
        if info is None or ref.method_name not in info.methods:
            raise ResolutionError(f"controller method {ref} not found")

    missing = [name for name in config.request_models if name not in classes]
    if missing:
        raise ResolutionError(f"request model classes not found: {missing}")
    root = config.root_model_name
    if root not in config.request_models:
        raise ResolutionError(f"root model {root} is not listed among the request models")

    program = Program(
        classes=classes,
        enums=enums,
        controllers=controllers,
        request_models=tuple(config.request_models),
        root_model=root,
        common_methods=dict(config.common_methods),
        invalid_state_patterns=tuple(config.invalid_state_patterns),
        max_depth=config.max_depth,
    )
    _map_models(program)
    logger.info(
        f"Resolved {len(classes)} classes, {len(enums)} enums, "
        f"{len(program.path_types)} request parameter paths"
    )
    return program


def source_files(directory: Path) -> List[Path]:
    directory = Path(directory)
    if directory.is_file():
        return [directory]
    return sorted(directory.rglob(f"*{SOURCE_SUFFIX}"))


def load_program(directory: Path, config: AnalysisConfig) -> Program:
    """Parse every ``.mj`` file under ``directory`` and resolve them together."""
    files = source_files(directory)
    if not files:
        raise ResolutionError(f"no {SOURCE_SUFFIX} files found under {directory}")
    return resolve_program([parse_file(path) for path in files], config)
