"""
Checkpoint format for PE and SNS states.

Little-endian header followed by each field's complex coefficients in k1-major
order:

    magic "HLIM" | version u32 | N1, N2, N3 u32 | L1, L2 f64 | eps f64 | t f64 | field count u32

eps is 0 for primitive-equation states.
"""

import logging
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from src.core.errors import ConfigurationError
from src.core.state import PeState, SnsState
from src.spectral import Grid, Parity, SpectralField

logger = logging.getLogger(__name__)

MAGIC = b"HLIM"
VERSION = 1

HEADER_FORMAT = '<4sI3I2d2dI'
HEADER_TOTAL_SIZE = struct.calcsize(HEADER_FORMAT)

PE_FIELD_COUNT = 2
SNS_FIELD_COUNT = 3

COEFFICIENT_DTYPE = np.dtype('<c16')


@dataclass
class CheckpointHeader:
    """Checkpoint header structure."""
    version: int
    n1: int
    n2: int
    n3: int
    l1: float
    l2: float
    eps: float
    t: float
    field_count: int

    @property
    def payload_size(self) -> int:
        return self.field_count * self.n1 * self.n2 * self.n3 * COEFFICIENT_DTYPE.itemsize


def create_header(header: CheckpointHeader) -> bytes:
    return struct.pack(
        HEADER_FORMAT,
        MAGIC,
        header.version,
        header.n1,
        header.n2,
        header.n3,
        header.l1,
        header.l2,
        header.eps,
        header.t,
        header.field_count,
    )


def parse_header(data: bytes) -> Optional[CheckpointHeader]:
    """Parse a checkpoint header from bytes."""
    if len(data) < HEADER_TOTAL_SIZE:
        return None

    magic, version, n1, n2, n3, l1, l2, eps, t, count = struct.unpack(
        HEADER_FORMAT, data[:HEADER_TOTAL_SIZE]
    )
    if magic != MAGIC:
        logger.error(f"Bad checkpoint magic {magic!r}")
        return None
    if version != VERSION:
        logger.error(f"Unsupported checkpoint version {version}")
        return None
    if count not in (PE_FIELD_COUNT, SNS_FIELD_COUNT):
        logger.error(f"Unexpected field count {count}")
        return None

    logger.debug(f"Parsed checkpoint header: grid={n1}x{n2}x{n3}, eps={eps}, t={t}")
    return CheckpointHeader(version, n1, n2, n3, l1, l2, eps, t, count)


def encode_state(state: Union[PeState, SnsState]) -> bytes:
    grid = state.grid
    if isinstance(state, SnsState):
        fields = state.stacked()
        eps = state.eps
    else:
        fields = state.v.coefficients
        eps = 0.0
    header = CheckpointHeader(
        VERSION, grid.n1, grid.n2, grid.n3, grid.l1, grid.l2, eps, state.t, fields.shape[0]
    )
    payload = np.ascontiguousarray(fields, dtype=COEFFICIENT_DTYPE).tobytes(order='C')
    return create_header(header) + payload


def decode_state(data: bytes, dealias_fraction: float = 2.0 / 3.0) -> Union[PeState, SnsState]:
    header = parse_header(data)
    if header is None:
        raise ConfigurationError("not a valid checkpoint")
    payload = data[HEADER_TOTAL_SIZE:]
    if len(payload) != header.payload_size:
        raise ConfigurationError(
            f"checkpoint payload has {len(payload)} bytes, expected {header.payload_size}"
        )
    if (header.eps == 0.0) != (header.field_count == PE_FIELD_COUNT):
        raise ConfigurationError("checkpoint eps does not match its field count")

    grid = Grid(header.n1, header.n2, header.n3, header.l1, header.l2, dealias_fraction)
    fields = np.frombuffer(payload, dtype=COEFFICIENT_DTYPE).reshape(
        (header.field_count,) + grid.shape
    ).astype(complex)
    v = SpectralField(fields[:2].copy(), grid, Parity.EVEN)
    if header.field_count == PE_FIELD_COUNT:
        return PeState(v=v, t=header.t)
    return SnsState(
        v=v, w=SpectralField(fields[2].copy(), grid, Parity.ODD), eps=header.eps, t=header.t
    )


def write_checkpoint(path: Union[str, Path], state: Union[PeState, SnsState]) -> Path:
    path = Path(path)
    path.write_bytes(encode_state(state))
    logger.info(f"Checkpoint written: {path}")
    return path


def read_checkpoint(path: Union[str, Path], dealias_fraction: float = 2.0 / 3.0):
    return decode_state(Path(path).read_bytes(), dealias_fraction)
