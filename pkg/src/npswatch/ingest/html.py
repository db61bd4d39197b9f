"""Tolerant HTML parsing into a tiny element tree.

Just enough DOM for declarative adapters: tag/class lookup, attribute
access, recursive text.  Built on the stdlib parser, which never raises
on sloppy markup; adapters decide what absence of structure means.
"""

from __future__ import annotations

from html.parser import HTMLParser
from typing import Iterator, Optional, Union

__all__ = ["Element", "parse_html"]

# elements that never take content and are not closed in the wild
_VOID = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)


class Element:
    __slots__ = ("tag", "attrs", "children", "parent")

    def __init__(self, tag: str, attrs: Optional[dict] = None, parent: Optional["Element"] = None):
        self.tag = tag
        self.attrs = attrs or {}
        self.children: list[Union[Element, str]] = []
        self.parent = parent

    def get(self, name: str, default: Optional[str] = None) -> Optional[str]:
        return self.attrs.get(name, default)

    def classes(self) -> frozenset[str]:
        return frozenset((self.attrs.get("class") or "").split())

    def iter(self) -> Iterator["Element"]:
        """Descendant elements, document order, self excluded."""
        for child in self.children:
            if isinstance(child, Element):
                yield child
                yield from child.iter()

    def find_all(self, tag: Optional[str] = None, cls: Optional[str] = None) -> list["Element"]:
        out = []
        for el in self.iter():
            if tag is not None and el.tag != tag:
                continue
            if cls is not None and cls not in el.classes():
                continue
            out.append(el)
        return out

    def find(self, tag: Optional[str] = None, cls: Optional[str] = None) -> Optional["Element"]:
        for el in self.iter():
            if tag is not None and el.tag != tag:
                continue
            if cls is None or cls in el.classes():
                return el
        return None

    def text(self) -> str:
        """Concatenated descendant text, whitespace collapsed."""
        parts: list[str] = []

        def walk(el: "Element"):
            for child in el.children:
                if isinstance(child, str):
                    parts.append(child)
                else:
                    walk(child)

        walk(self)
        return " ".join("".join(parts).split())

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"<Element {self.tag} {self.attrs!r}>"


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = Element("#document")
        self._stack = [self.root]

    def handle_starttag(self, tag, attrs):
        el = Element(tag, dict(attrs), self._stack[-1])
        self._stack[-1].children.append(el)
        if tag not in _VOID:
            self._stack.append(el)

    def handle_startendtag(self, tag, attrs):
        self._stack[-1].children.append(Element(tag, dict(attrs), self._stack[-1]))

    def handle_endtag(self, tag):
        # pop to the nearest open tag of this name; stray closers ignored
        for i in range(len(self._stack) - 1, 0, -1):
            if self._stack[i].tag == tag:
                del self._stack[i:]
                break

    def handle_data(self, data):
        if data:
            self._stack[-1].children.append(data)


def parse_html(page: Union[bytes, str]) -> Element:
    if isinstance(page, bytes):
        page = page.decode("utf-8", errors="replace")
    builder = _TreeBuilder()
    builder.feed(page)
    builder.close()
    return builder.root
