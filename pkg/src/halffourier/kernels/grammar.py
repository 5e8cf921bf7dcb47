"""Text form of kernels.

Grammar::

    kernel := "exp(" "delta=" NUM ")"
            | "singexp(" "p=" NUM "," "delta=" NUM ")"     (keys in any order)
            | "table:" PATH
            | "scale(" NUM "," kernel ")"
            | "sum(" kernel "," kernel ")"

Whitespace between tokens is ignored.  ``PATH`` runs up to the next ``,``
or ``)`` (or the end of the text), so paths containing those characters
cannot be referenced.  A table file is CSV with the header ``s,value``.
"""
import csv
import re

from halffourier.errors import DomainError, KernelSpecError
from halffourier.kernels.base import Exponential, Scaled, SingularExponential, Sum, Tabulated

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_NAME = re.compile(r"[A-Za-z_]+")


def load_table(path, limit=None):
    """Read a tabulated kernel from a ``s,value`` CSV file."""
    s_vals, f_vals = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["s", "value"]:
            raise DomainError(f"{path}: expected header 's,value', got {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise DomainError(f"{path}:{lineno}: expected two columns")
            try:
                s_vals.append(float(row[0]))
                f_vals.append(float(row[1]))
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: {exc}") from None
    return Tabulated(s_vals, f_vals, path=str(path), limit=limit)


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def fail(self, message, pos=None):
        raise KernelSpecError(message, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, token):
        self.skip()
        if not self.text.startswith(token, self.pos):
            found = self.text[self.pos:self.pos + 1] or "end of input"
            self.fail(f"expected {token!r}, found {found!r}")
        self.pos += len(token)

    def number(self):
        self.skip()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.fail("expected a number")
        self.pos = m.end()
        return float(m.group()), m.start()

    def name(self):
        self.skip()
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.fail("expected a kernel name (exp, singexp, table, scale, sum)")
        self.pos = m.end()
        return m.group(), m.start()

    def keywords(self, wanted):
        """Parse ``key=NUM`` pairs separated by commas, then ``)``."""
        found = {}
        while True:
            key, at = self.name()
            if key not in wanted:
                self.fail(f"unexpected argument {key!r}; expected one of {sorted(wanted)}", at)
            if key in found:
                self.fail(f"duplicate argument {key!r}", at)
            self.expect("=")
            found[key] = self.number()
            if len(found) == len(wanted):
                break
            self.expect(",")
        self.expect(")")
        return found

    def build(self, factory, at, *args):
        try:
            return factory(*args)
        except DomainError as exc:
            raise KernelSpecError(str(exc), at) from exc

    def kernel(self):
        name, at = self.name()
        if name == "table":
            self.expect(":")
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos] not in ",)":
                self.pos += 1
            path = self.text[start:self.pos].strip()
            if not path:
                self.fail("expected a file path after 'table:'", start)
            try:
                return load_table(path)
            except OSError as exc:
                raise KernelSpecError(f"cannot read table {path!r}: {exc.strerror}", start) from exc
            except DomainError as exc:
                raise KernelSpecError(str(exc), start) from exc
        self.expect("(")
        if name == "exp":
            args = self.keywords({"delta"})
            return self.build(Exponential, args["delta"][1], args["delta"][0])
        if name == "singexp":
            args = self.keywords({"p", "delta"})
            return self.build(SingularExponential, args["p"][1], args["p"][0], args["delta"][0])
        if name == "scale":
            factor, fat = self.number()
            self.expect(",")
            inner = self.kernel()
            self.expect(")")
            return self.build(Scaled, fat, factor, inner)
        if name == "sum":
            first = self.kernel()
            self.expect(",")
            second = self.kernel()
            self.expect(")")
            return self.build(Sum, at, first, second)
        self.fail(f"unknown kernel {name!r}", at)


def parse_kernel(text):
    """Parse a kernel expression such as ``"scale(3,singexp(p=0.25,delta=2))"``.

    Raises
    ------
    KernelSpecError
        with the offending position, for syntax errors, invalid parameters
        (``p`` outside [0, 1), ``delta <= 0``) and unreadable tables.
    """
    parser = _Parser(text)
    kernel = parser.kernel()
    parser.skip()
    if parser.pos != len(text):
        parser.fail("unexpected trailing input")
    return kernel


def render(kernel):
    """Inverse of :func:`parse_kernel` (floats printed with ``repr``)."""
    return kernel.render()
