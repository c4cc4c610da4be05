from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence


@dataclass
class TextTable:
    headers: Sequence[str]
    rows: list[tuple[str, ...]] = field(default_factory=list)

    def add(self, *cells: object) -> None:
        if len(cells) != len(self.headers):
            raise ValueError(f"expected {len(self.headers)} cells, got {len(cells)}")
        self.rows.append(tuple(str(cell) for cell in cells))

    def render_psql(self, title: str | None = None) -> str:
        columns = range(len(self.headers))
        widths = [
            max(len(self.headers[i]), *(len(row[i]) for row in self.rows)) if self.rows else len(self.headers[i])
            for i in columns
        ]
        border = "+" + "+".join("-" * (width + 2) for width in widths) + "+"
        lines = [border]
        lines.append("| " + " | ".join(self.headers[i].ljust(widths[i]) for i in columns) + " |")
        lines.append(border)
        for row in self.rows:
            lines.append("| " + " | ".join(row[i].ljust(widths[i]) for i in columns) + " |")
        lines.append(border)
        table = "\n".join(lines)
        if title:
            return f"{title}\n{table}"
        return table
