"""DNA encoding, sliding-window database construction, and register sizing."""

from __future__ import annotations

import io
from dataclasses import dataclass

from .errors import SequenceParseError

BASES = "ATGC"
BASE_BITS = {"A": "00", "T": "01", "G": "10", "C": "11"}
BITS_BASE = {v: k for k, v in BASE_BITS.items()}

AMINO_ACID_BITS = 5  # 2^4 < 20 <= 2^5


def encode_base(base: str) -> str:
    return BASE_BITS[base]


def decode_bits(bits: str) -> str:
    return BITS_BASE[bits]


def encode_window(window: str) -> str:
    """2-bit-per-base encoding; leftmost base occupies the highest data bits."""
    return "".join(BASE_BITS[b] for b in window)


def decode_window(bits: str) -> str:
    if len(bits) % 2:
        raise ValueError("encoded window must have even bit length")
    return "".join(BITS_BASE[bits[i : i + 2]] for i in range(0, len(bits), 2))


def parse_sequence(text: str | io.TextIOBase) -> str:
    """Parse plain or FASTA-style text into an uppercase A/T/G/C string.

    Header lines (starting '>') and whitespace are skipped. Any other
    character raises SequenceParseError naming its 1-based position within
    the sequence payload (headers and whitespace excluded from positions).
    """
    if not isinstance(text, str):
        text = text.read()
    bases = []
    pos = 0
    for line in text.splitlines():
        if line.startswith(">"):
            continue
        for ch in line:
            if ch.isspace():
                continue
            pos += 1
            up = ch.upper()
            if up not in BASE_BITS:
                raise SequenceParseError(
                    f"invalid base {ch!r} at position {pos}", pos
                )
            bases.append(up)
    seq = "".join(bases)
    if not seq:
        raise SequenceParseError("empty sequence", 0)
    return seq


def next_power_of_two(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


@dataclass(frozen=True)
class ReadWindowDatabase:
    """All N-M+1 length-M windows of a genome, in genome order.

    ``windows`` maps slot index -> encoded 2M-bit string. When the window
    count is not a power of two, slots [count, padded_size) repeat the data
    of window 0; those padding slots are made non-matchable at the oracle
    level by a reserved flag qubit (see RegisterLayout).
    """

    genome: str
    window_length: int
    windows: tuple[str, ...]
    padded_size: int

    @property
    def count(self) -> int:
        return len(self.windows)

    @property
    def has_padding(self) -> bool:
        return self.padded_size > self.count

    def window_string(self, i: int) -> str:
        return self.genome[i : i + self.window_length]

    def to_csv(self) -> str:
        lines = ["index,window_string,encoded_bits"]
        for i, bits in enumerate(self.windows):
            lines.append(f"{i},{self.window_string(i)},{bits}")
        return "\n".join(lines) + "\n"


def build_window_db(genome: str, window_length: int) -> ReadWindowDatabase:
    n = len(genome)
    m = window_length
    if not 1 <= m <= n:
        raise ValueError(f"window length must be in 1..{n}, got {m}")
    windows = tuple(encode_window(genome[i : i + m]) for i in range(n - m + 1))
    return ReadWindowDatabase(
        genome=genome,
        window_length=m,
        windows=windows,
        padded_size=next_power_of_two(len(windows)),
    )


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit budget: data register low, optional padding flag, index register high."""

    index_qubits: int
    data_qubits: int
    flag_qubits: int

    @property
    def total(self) -> int:
        return self.index_qubits + self.data_qubits + self.flag_qubits

    @property
    def flag_qubit(self) -> int | None:
        return self.data_qubits if self.flag_qubits else None

    def index_qubit(self, j: int) -> int:
        return self.data_qubits + self.flag_qubits + j


def layout_for(genome_length: int, window_length: int,
               bits_per_symbol: int = 2) -> RegisterLayout:
    """Register sizing from lengths alone (no database materialization).

    ``bits_per_symbol=5`` gives the amino-acid sizing variant; only the DNA
    (2-bit) layout has a search pipeline behind it.
    """
    count = genome_length - window_length + 1
    if count < 1:
        raise ValueError("window length exceeds genome length")
    padded = next_power_of_two(count)
    return RegisterLayout(
        index_qubits=padded.bit_length() - 1,
        data_qubits=bits_per_symbol * window_length,
        flag_qubits=1 if padded > count else 0,
    )


def register_layout(db: ReadWindowDatabase) -> RegisterLayout:
    return layout_for(len(db.genome), db.window_length)
