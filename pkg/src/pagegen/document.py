"""Hierarchical page document model: nodes, validation, JSON parsing and serialization.

The wire format is a nested JSON object with keys `_class`, `name`,
`frame` (x, y, width, height), `string`, `layers`, `style`, usually wrapped
in a ```json fenced block by the generating model.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .classes import ARTBOARD, WIDGET_CLASS_SET, canonical_class

CANVAS_WIDTH = 1440.0
CANVAS_HEIGHT = 2560.0

_KEY_ORDER = ("_class", "name", "frame", "string", "layers", "style")
_KNOWN_KEYS = frozenset(_KEY_ORDER)
_FRAME_KEYS = frozenset({"x", "y", "width", "height", "w", "h"})

_FENCE_RE = re.compile(r"```(?:json)?[ \t]*\r?\n(.*?)(?:\r?\n)?[ \t]*```", re.DOTALL)
_OPEN_FENCE_RE = re.compile(r"```(?:json)?[ \t]*\r?\n")


class DocumentError(Exception):
    """Base class for page document parsing failures."""


class NoJsonFound(DocumentError):
    pass


class MalformedJson(DocumentError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class SchemaViolation(DocumentError):
    """JSON parsed but could not be mapped onto the document schema."""

    def __init__(self, issues: list[ValidationIssue]):
        super().__init__("; ".join(str(i) for i in issues))
        self.issues = issues


@dataclass(frozen=True)
class Frame:
    x: float
    y: float
    width: float
    height: float

    @property
    def right(self) -> float:
        return self.x + self.width

    @property
    def bottom(self) -> float:
        return self.y + self.height

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains(self, other: Frame, tol: float = 1e-6) -> bool:
        return (
            other.x >= self.x - tol
            and other.y >= self.y - tol
            and other.right <= self.right + tol
            and other.bottom <= self.bottom + tol
        )


CANVAS_FRAME = Frame(0.0, 0.0, CANVAS_WIDTH, CANVAS_HEIGHT)


@dataclass(frozen=True)
class HierarchicalPath:
    """Chain of (class label, sibling index) segments locating a node.

    Sibling indices count per class within one parent, starting at 1.
    """

    segments: tuple[tuple[str, int], ...]

    @staticmethod
    def root() -> HierarchicalPath:
        return HierarchicalPath(((ARTBOARD, 1),))

    def child(self, label: str, index: int) -> HierarchicalPath:
        return HierarchicalPath(self.segments + ((label, index),))

    def parent(self) -> HierarchicalPath:
        return HierarchicalPath(self.segments[:-1])

    @property
    def depth(self) -> int:
        return len(self.segments)

    def classes(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.segments)

    def render(self) -> str:
        return "->".join(f"{label}:{idx}" for label, idx in self.segments)

    def render_classes(self) -> str:
        return "->".join(self.classes())

    def to_json(self) -> list[list[object]]:
        return [[label, idx] for label, idx in self.segments]

    @staticmethod
    def from_json(data: list) -> HierarchicalPath:
        return HierarchicalPath(tuple((str(l), int(i)) for l, i in data))


@dataclass(frozen=True)
class LayoutNode:
    label: str
    frame: Frame
    name: str = ""
    string: str | None = None
    style: dict | None = None
    layers: tuple[LayoutNode, ...] = ()

    def __post_init__(self):
        if isinstance(self.layers, list):
            object.__setattr__(self, "layers", tuple(self.layers))
        if self.style is not None and not self.style:
            object.__setattr__(self, "style", None)

    @property
    def value(self) -> str | None:
        """Display value: string for Text, name for Image/Icon nodes."""
        if self.string is not None:
            return self.string
        if self.label in ("Image", "Icon") and self.name:
            return self.name
        return None


@dataclass(frozen=True)
class PageDocument:
    root: LayoutNode
    canvas: Frame = CANVAS_FRAME
    warnings: tuple[str, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.code} at {self.path}: {self.message}"


@dataclass
class ValidationReport:
    issues: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, code: str, path: str, message: str) -> None:
        self.issues.append(ValidationIssue(code, path, message))

    def __iter__(self):
        return iter(self.issues)

    def __len__(self) -> int:
        return len(self.issues)


# ---------------------------------------------------------------------------
# validation

def validate_node(
    node: LayoutNode,
    parent_frame: Frame | None = None,
    strict: bool = False,
    _path: str = "",
    _report: ValidationReport | None = None,
) -> ValidationReport:
    """Collect schema violations for a node subtree; never raises.

    In strict mode a frame extending beyond the parent frame is a violation.
    """
    report = _report if _report is not None else ValidationReport()
    path = _path or node.label
    if node.label not in WIDGET_CLASS_SET:
        report.add("unknown-class", path, f"{node.label!r} is not a known widget class")
    if node.frame is None:
        report.add("missing-frame", path, "node has no frame")
    else:
        if node.frame.width < 0 or node.frame.height < 0:
            report.add("negative-size", path, f"{node.frame.width}x{node.frame.height}")
        for attr in ("x", "y", "width", "height"):
            v = getattr(node.frame, attr)
            if v != v or v in (float("inf"), float("-inf")):
                report.add("non-finite", path, f"frame.{attr} = {v}")
        if strict and parent_frame is not None and not parent_frame.contains(node.frame):
            report.add("out-of-bounds", path, "frame extends beyond parent frame")
    if node.label == "Text" and node.string is None:
        report.add("text-missing-string", path, "Text node has no string")
    if node.label == ARTBOARD and _path:
        report.add("nested-artboard", path, "artboard below the document root")
    for i, child in enumerate(node.layers):
        validate_node(child, node.frame, strict, f"{path}/{i}:{child.label}", report)
    return report


def validate_page(doc: PageDocument, strict: bool = False) -> ValidationReport:
    report = ValidationReport()
    if doc.root.label != ARTBOARD:
        report.add("bad-root", doc.root.label, "document root is not an artboard")
    if (doc.canvas.width, doc.canvas.height) != (CANVAS_WIDTH, CANVAS_HEIGHT):
        report.add(
            "bad-canvas", "canvas",
            f"{doc.canvas.width}x{doc.canvas.height} != {CANVAS_WIDTH:g}x{CANVAS_HEIGHT:g}",
        )
    validate_node(doc.root, doc.canvas, strict, doc.root.label, report)
    return report


# ---------------------------------------------------------------------------
# parsing

def strip_line_comments(text: str) -> str:
    """Drop everything after a // that is not inside a JSON string."""
    out_lines = []
    for line in text.splitlines():
        in_string = False
        escaped = False
        cut = len(line)
        for i, ch in enumerate(line):
            if escaped:
                escaped = False
                continue
            if ch == "\\" and in_string:
                escaped = True
            elif ch == '"':
                in_string = not in_string
            elif ch == "/" and not in_string and i + 1 < len(line) and line[i + 1] == "/":
                cut = i
                break
        out_lines.append(line[:cut])
    return "\n".join(out_lines)


def extract_json_payload(text: str, warnings: list[str]) -> str:
    """Pull the JSON payload out of the first fenced block, or the bare text."""
    blocks = _FENCE_RE.findall(text)
    if blocks:
        if len(blocks) > 1:
            warnings.append(f"{len(blocks)} fenced blocks found; using the first")
        return blocks[0]
    opened = _OPEN_FENCE_RE.search(text)
    if opened:
        # Opening fence without a closing one, typically a truncated response.
        warnings.append("unterminated fenced block; parsing to end of text")
        return text[opened.end():]
    stripped = text.strip()
    if stripped.startswith("{") or stripped.startswith("["):
        return stripped
    start = text.find("{")
    end = text.rfind("}")
    if start != -1 and end > start:
        warnings.append("no fenced block; extracted brace-delimited span")
        return text[start : end + 1]
    raise NoJsonFound("no JSON payload in text")


def _as_number(value, where: str, issues: list[ValidationIssue]) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        issues.append(ValidationIssue("bad-number", where, f"expected number, got {value!r}"))
        return 0.0
    v = float(value)
    if v != v or v in (float("inf"), float("-inf")):
        issues.append(ValidationIssue("non-finite", where, f"{v}"))
        return 0.0
    return v


def _build_frame(obj, where: str, issues: list[ValidationIssue]) -> Frame:
    if not isinstance(obj, dict):
        issues.append(ValidationIssue("bad-frame", where, f"frame is {type(obj).__name__}"))
        return Frame(0.0, 0.0, 0.0, 0.0)
    def pick(*names):
        for n in names:
            if n in obj:
                return obj[n]
        return None
    values = {}
    for canon, aliases in (("x", ("x",)), ("y", ("y",)),
                           ("width", ("width", "w")), ("height", ("height", "h"))):
        raw = pick(*aliases)
        if raw is None:
            issues.append(ValidationIssue("missing-frame-field", where, f"frame.{canon} absent"))
            values[canon] = 0.0
        else:
            values[canon] = _as_number(raw, f"{where}.{canon}", issues)
    unknown = set(obj) - _FRAME_KEYS
    return Frame(values["x"], values["y"], values["width"], values["height"]), unknown  # type: ignore[return-value]


def _build_node(obj, where: str, issues: list[ValidationIssue], warnings: list[str]) -> LayoutNode:
    if not isinstance(obj, dict):
        issues.append(ValidationIssue("bad-node", where, f"expected object, got {type(obj).__name__}"))
        return LayoutNode(label="", frame=Frame(0.0, 0.0, 0.0, 0.0))

    raw_label = obj.get("_class")
    if not isinstance(raw_label, str) or not raw_label:
        issues.append(ValidationIssue("missing-class", where, "_class absent or not a string"))
        label = ""
    else:
        canon = canonical_class(raw_label)
        if canon is not None and canon != raw_label:
            warnings.append(f"{where}: class {raw_label!r} normalized to {canon!r}")
        label = canon if canon is not None else raw_label

    if "frame" not in obj:
        issues.append(ValidationIssue("missing-frame", where, "frame absent"))
        frame = Frame(0.0, 0.0, 0.0, 0.0)
    else:
        frame, frame_unknown = _build_frame(obj["frame"], f"{where}.frame", issues)
        if frame_unknown:
            warnings.append(f"{where}.frame: unknown keys {sorted(frame_unknown)}")

    name = obj.get("name", "")
    if not isinstance(name, str):
        name = str(name)

    string = obj.get("string")
    if string is not None and not isinstance(string, str):
        string = str(string)

    style = obj.get("style")
    if style is not None and not isinstance(style, dict):
        issues.append(ValidationIssue("bad-style", where, f"style is {type(style).__name__}"))
        style = None

    layers_obj = obj.get("layers", [])
    children: list[LayoutNode] = []
    if not isinstance(layers_obj, list):
        issues.append(ValidationIssue("bad-layers", where, f"layers is {type(layers_obj).__name__}"))
    else:
        for i, child in enumerate(layers_obj):
            children.append(_build_node(child, f"{where}.layers[{i}]", issues, warnings))

    unknown = set(obj) - _KNOWN_KEYS
    if unknown:
        warnings.append(f"{where}: unknown keys {sorted(unknown)}")

    return LayoutNode(label=label, frame=frame, name=name, string=string,
                      style=style, layers=tuple(children))


def parse_layout_json(text: str, warnings: list[str] | None = None) -> LayoutNode:
    """Parse any node subtree from raw model output (fences and comments tolerated)."""
    sink = warnings if warnings is not None else []
    payload = strip_line_comments(extract_json_payload(text, sink))
    try:
        obj = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise MalformedJson(exc.msg, exc.pos) from exc
    issues: list[ValidationIssue] = []
    node = _build_node(obj, "$", issues, sink)
    if issues:
        raise SchemaViolation(issues)
    return node


def parse_page_json(text: str) -> PageDocument:
    """Parse a whole-page document; the root must be an artboard."""
    warnings: list[str] = []
    node = parse_layout_json(text, warnings)
    if node.label != ARTBOARD:
        raise SchemaViolation([ValidationIssue("bad-root", "$", f"root class is {node.label!r}")])
    return PageDocument(root=node, warnings=tuple(warnings))


# ---------------------------------------------------------------------------
# serialization

def _num(v: float):
    f = float(v)
    if f.is_integer() and abs(f) < 2 ** 53:
        return int(f)
    return f


def _node_to_obj(node: LayoutNode) -> dict:
    obj: dict = {
        "_class": node.label,
        "name": node.name,
        "frame": {
            "x": _num(node.frame.x),
            "y": _num(node.frame.y),
            "width": _num(node.frame.width),
            "height": _num(node.frame.height),
        },
    }
    if node.string is not None:
        obj["string"] = node.string
    if node.layers:
        obj["layers"] = [_node_to_obj(c) for c in node.layers]
    if node.style:
        obj["style"] = {k: node.style[k] for k in sorted(node.style)}
    return obj


def serialize_node(node: LayoutNode) -> str:
    return json.dumps(_node_to_obj(node), indent=2, ensure_ascii=False)


def serialize_page(doc: PageDocument) -> str:
    return serialize_node(doc.root)


# ---------------------------------------------------------------------------
# traversal

def flatten(doc: PageDocument) -> list[tuple[HierarchicalPath, LayoutNode]]:
    """Depth-first pre-order traversal with per-class sibling indices from 1."""
    out: list[tuple[HierarchicalPath, LayoutNode]] = []

    def walk(node: LayoutNode, path: HierarchicalPath) -> None:
        out.append((path, node))
        counts: dict[str, int] = {}
        for child in node.layers:
            counts[child.label] = counts.get(child.label, 0) + 1
            walk(child, path.child(child.label, counts[child.label]))

    walk(doc.root, HierarchicalPath(((doc.root.label, 1),)))
    return out
