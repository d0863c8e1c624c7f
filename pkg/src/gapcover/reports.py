"""Line-oriented certificate reports shared by the reductions and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

SCHEMA_VERSION = 1

__all__ = ["CheckRecord", "CertificateReport", "SCHEMA_VERSION"]


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    lemma_tag: str
    inputs: str
    margin: str
    passed: bool

    def to_line(self) -> str:
        status = "pass" if self.passed else "fail"
        return f"check {self.check_id} {self.lemma_tag} {status} inputs=[{self.inputs}] margin=[{self.margin}]"

    @staticmethod
    def from_line(line: str) -> "CheckRecord":
        head, _, rest = line.partition(" inputs=[")
        inputs, _, margin_part = rest.partition("] margin=[")
        margin = margin_part.rstrip("]")
        _, check_id, lemma_tag, status = head.split()
        return CheckRecord(check_id, lemma_tag, inputs, margin, status == "pass")


@dataclass
class CertificateReport:
    kind: str
    config: str = ""
    records: List[CheckRecord] = field(default_factory=list)
    summary: str = ""
    elapsed_s: float = 0.0
    extra: Tuple[str, ...] = ()
    data: dict = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, check_id: str, lemma_tag: str, inputs: str, margin: str, passed: bool) -> None:
        self.records.append(CheckRecord(check_id, lemma_tag, inputs, margin, passed))

    def failures(self) -> List[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def to_text(self) -> str:
        lines = [f"kcreport {SCHEMA_VERSION} {self.kind}"]
        if self.config:
            lines.append(f"config {self.config}")
        for extra in self.extra:
            lines.append(f"note {extra}")
        for key in sorted(self.data):
            lines.append(f"data {key}={self.data[key]}")
        lines.extend(r.to_line() for r in self.records)
        if self.summary:
            lines.append(f"summary {self.summary}")
        lines.append(f"elapsed {self.elapsed_s:.3f}")
        lines.append(f"verdict {'pass' if self.verdict else 'fail'}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "CertificateReport":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = lines[0].split()
        if header[0] != "kcreport" or int(header[1]) != SCHEMA_VERSION:
            raise ValueError("unknown report schema")
        report = CertificateReport(kind=header[2])
        for ln in lines[1:]:
            if ln.startswith("config "):
                report.config = ln[len("config "):]
            elif ln.startswith("note "):
                report.extra = report.extra + (ln[len("note "):],)
            elif ln.startswith("data "):
                key, _, value = ln[len("data "):].partition("=")
                report.data[key] = value
            elif ln.startswith("check "):
                report.records.append(CheckRecord.from_line(ln))
            elif ln.startswith("summary "):
                report.summary = ln[len("summary "):]
            elif ln.startswith("elapsed "):
                report.elapsed_s = float(ln.split()[1])
        return report
