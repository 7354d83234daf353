"""Widget class vocabulary: the closed label set, basic/composite split, aliases."""

from __future__ import annotations

ARTBOARD = "artboard"

# Closed set of 26 element categories, including the artboard root.
WIDGET_CLASSES: tuple[str, ...] = (
    "Web View",
    "List Item",
    "Multi-Tab",
    "Input",
    "Text Button",
    "Slider",
    "Background Image",
    "Advertisement",
    "Card",
    "Bottom Navigation",
    "Modal",
    "On/Off Switch",
    "Button Bar",
    "Number Stepper",
    "Text",
    "Map View",
    "Checkbox",
    "Date Picker",
    "Image",
    "Drawer",
    "Radio Button",
    "Video",
    "Toolbar",
    "Pager Indicator",
    "Icon",
    ARTBOARD,
)

WIDGET_CLASS_SET = frozenset(WIDGET_CLASSES)

# Leaf widgets that never require recursive expansion.
BASIC_CLASSES = frozenset({
    "Text",
    "Image",
    "Icon",
    "Pager Indicator",
    "Checkbox",
    "Radio Button",
    "On/Off Switch",
    "Slider",
    "Number Stepper",
    "Input",
    "Video",
    "Map View",
    "Web View",
    "Background Image",
    "Advertisement",
})

# Container widgets whose sub-layout is generated recursively.
COMPOSITE_CLASSES = frozenset(WIDGET_CLASS_SET - BASIC_CLASSES - {ARTBOARD})

# Non-canonical labels seen in model output, mapped to canonical classes.
# Keys are lowercase.
CLASS_ALIASES: dict[str, str] = {
    "picture": "Image",
    "photo": "Image",
    "img": "Image",
    "button": "Text Button",
    "textbutton": "Text Button",
    "text button": "Text Button",
    "switch": "On/Off Switch",
    "tab": "Multi-Tab",
}

_LOWER_TO_CANONICAL = {c.lower(): c for c in WIDGET_CLASSES}


def canonical_class(label: str) -> str | None:
    """Map a label to its canonical widget class, or None if unrecognized.

    Resolution order: exact member, case-insensitive member, alias table,
    then a singular form with a trailing plural 's'/'es' stripped.
    """
    if label in WIDGET_CLASS_SET:
        return label
    low = label.strip().lower()
    if low in _LOWER_TO_CANONICAL:
        return _LOWER_TO_CANONICAL[low]
    if low in CLASS_ALIASES:
        return CLASS_ALIASES[low]
    for suffix in ("es", "s"):
        if low.endswith(suffix):
            stem = low[: -len(suffix)]
            if stem in _LOWER_TO_CANONICAL:
                return _LOWER_TO_CANONICAL[stem]
            if stem in CLASS_ALIASES:
                return CLASS_ALIASES[stem]
    return None
