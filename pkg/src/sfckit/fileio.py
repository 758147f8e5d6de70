"""Line-oriented tokenizer shared by the .sfc/.sfa/.sfp parsers.

All three formats are UTF-8 text, `#` starts a comment, blank lines are
skipped, and probabilities are written `a/b` or as a bare integer.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import InputError

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(tok: str, line=None) -> Fraction:
    if not _RATIONAL.match(tok):
        raise InputError(f"bad rational {tok!r}", line=line)
    try:
        return Fraction(tok)
    except ZeroDivisionError:
        raise InputError(f"zero denominator in {tok!r}", line=line) from None


class LineReader:
    """Iterates (line number, token list) over comment-stripped content."""

    def __init__(self, text):
        if isinstance(text, bytes):
            text = text.decode("utf-8")
        self._items = []
        for i, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0].strip()
            if body:
                self._items.append((i, body.split()))
        self._pos = 0

    def peek(self):
        if self._pos >= len(self._items):
            return None
        return self._items[self._pos]

    def next(self, context="input"):
        item = self.peek()
        if item is None:
            raise InputError(f"unexpected end of file while reading {context}")
        self._pos += 1
        return item

    def expect(self, keyword):
        line, toks = self.next(context=keyword)
        if toks[0] != keyword:
            raise InputError(f"expected {keyword!r}, found {toks[0]!r}", line=line)
        return line, toks

    def at_end(self):
        return self.peek() is None


def read_row(reader, width, context, allow_dash=False):
    """One probability row: `width` rationals, or a lone `-` when allowed."""
    line, toks = reader.next(context=context)
    if allow_dash and toks == ["-"]:
        return line, None
    if len(toks) != width:
        raise InputError(f"{context}: expected {width} entries, got {len(toks)}", line=line)
    return line, tuple(parse_rational(t, line=line) for t in toks)


def format_rational(fr: Fraction) -> str:
    return str(fr)
