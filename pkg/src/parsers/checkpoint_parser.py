"""
GZGD Checkpoint Container

Binary container for trained network weights. Little-endian throughout.

Format (version 1):
- 4 bytes: magic "GZGD"
- 4 bytes: version (uint32)
- 4 bytes: metadata length M (uint32)
- M bytes: UTF-8 JSON metadata (kind, config, loss curve, ...)
- 4 bytes: entry count N (uint32)
- N entries, each:
    2 bytes    name length L (uint16)
    L bytes    UTF-8 name
    1 byte     dtype code (0 = f32, 1 = f64)
    1 byte     ndim D
    D*4 bytes  dims (uint32 each)
    payload    prod(dims) * itemsize bytes, little-endian, C order

Unknown versions are rejected. Trailing bytes after the last entry are
an error.
"""

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from ..constants.formats import (
    CHECKPOINT_MAGIC,
    CHECKPOINT_VERSION,
    DTYPE_CODES,
    DTYPE_NAMES,
    DTYPE_NUMPY,
    SUPPORTED_CHECKPOINT_VERSIONS,
)
from ..errors import CheckpointError


@dataclass
class Checkpoint:
    """Named tensors plus JSON metadata."""
    entries: Dict[str, np.ndarray] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)
    version: int = CHECKPOINT_VERSION

    @property
    def kind(self) -> str:
        return self.metadata.get('kind', '')

    def __getitem__(self, name: str) -> np.ndarray:
        return self.entries[name]

    def __contains__(self, name: str) -> bool:
        return name in self.entries


def _dtype_name(array: np.ndarray) -> str:
    if array.dtype == np.float32:
        return 'f32'
    if array.dtype == np.float64:
        return 'f64'
    raise CheckpointError(f"unsupported tensor dtype {array.dtype}; only f32 and f64 are stored")


def encode_checkpoint(checkpoint: Checkpoint) -> bytes:
    """Serialize a checkpoint to bytes."""
    if checkpoint.version not in SUPPORTED_CHECKPOINT_VERSIONS:
        raise CheckpointError(f"cannot write checkpoint version {checkpoint.version}")

    meta = json.dumps(checkpoint.metadata, sort_keys=True).encode('utf-8')
    parts = [
        CHECKPOINT_MAGIC,
        struct.pack('<I', checkpoint.version),
        struct.pack('<I', len(meta)),
        meta,
        struct.pack('<I', len(checkpoint.entries)),
    ]
    for name, array in checkpoint.entries.items():
        array = np.asarray(array)
        dtype = _dtype_name(array)
        name_bytes = name.encode('utf-8')
        if len(name_bytes) > 0xFFFF:
            raise CheckpointError(f"entry name too long: {name[:40]}...")
        if array.ndim > 0xFF:
            raise CheckpointError(f"entry {name!r} has too many dimensions")
        parts.append(struct.pack('<H', len(name_bytes)))
        parts.append(name_bytes)
        parts.append(struct.pack('<BB', DTYPE_CODES[dtype], array.ndim))
        parts.append(struct.pack(f'<{array.ndim}I', *array.shape))
        parts.append(np.ascontiguousarray(array, dtype=DTYPE_NUMPY[dtype]).tobytes())
    return b''.join(parts)


class CheckpointParser:
    """
    Parser for GZGD checkpoint files.

    Usage:
        parser = CheckpointParser("ae.gzgd")
        parser.parse()
        weights = parser.checkpoint.entries
        print(parser.dump_info())
    """

    def __init__(self, filepath: Optional[str | Path] = None, data: Optional[bytes] = None):
        self.filepath = Path(filepath) if filepath is not None else None
        self._data: bytes = data or b''
        self.checkpoint: Optional[Checkpoint] = None
        self._parsed = False

    def _need(self, offset: int, size: int, what: str) -> None:
        if offset + size > len(self._data):
            raise CheckpointError(f"{self._name}: truncated while reading {what} at offset 0x{offset:X}")

    @property
    def _name(self) -> str:
        return self.filepath.name if self.filepath else '<bytes>'

    def parse(self) -> None:
        """Parse the checkpoint container."""
        if self.filepath is not None:
            try:
                with open(self.filepath, 'rb') as f:
                    self._data = f.read()
            except OSError as e:
                raise CheckpointError(f"cannot read checkpoint {self.filepath}: {e}") from e

        data = self._data
        self._need(0, 12, 'header')
        if data[:4] != CHECKPOINT_MAGIC:
            raise CheckpointError(f"{self._name}: bad magic {data[:4]!r}, expected {CHECKPOINT_MAGIC!r}")
        version, meta_len = struct.unpack_from('<II', data, 4)
        if version not in SUPPORTED_CHECKPOINT_VERSIONS:
            raise CheckpointError(f"{self._name}: unsupported checkpoint version {version}")

        offset = 12
        self._need(offset, meta_len, 'metadata')
        try:
            metadata = json.loads(data[offset:offset + meta_len].decode('utf-8')) if meta_len else {}
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise CheckpointError(f"{self._name}: corrupt metadata block: {e}") from e
        offset += meta_len

        self._need(offset, 4, 'entry count')
        count = struct.unpack_from('<I', data, offset)[0]
        offset += 4

        entries: Dict[str, np.ndarray] = {}
        for _ in range(count):
            self._need(offset, 2, 'entry name length')
            name_len = struct.unpack_from('<H', data, offset)[0]
            offset += 2
            self._need(offset, name_len + 2, 'entry name')
            name = data[offset:offset + name_len].decode('utf-8')
            offset += name_len
            dtype_code, ndim = struct.unpack_from('<BB', data, offset)
            offset += 2
            if dtype_code not in DTYPE_NAMES:
                raise CheckpointError(f"{self._name}: entry {name!r} has unknown dtype code {dtype_code}")
            self._need(offset, 4 * ndim, f'dims of {name!r}')
            shape = struct.unpack_from(f'<{ndim}I', data, offset)
            offset += 4 * ndim

            dtype = np.dtype(DTYPE_NUMPY[DTYPE_NAMES[dtype_code]])
            size = int(np.prod(shape, dtype=np.int64)) * dtype.itemsize
            self._need(offset, size, f'payload of {name!r}')
            array = np.frombuffer(data, dtype=dtype, count=size // dtype.itemsize, offset=offset)
            entries[name] = array.reshape(shape).astype(dtype.newbyteorder('='), copy=True)
            offset += size

        if offset != len(data):
            raise CheckpointError(f"{self._name}: {len(data) - offset} trailing bytes after last entry")

        self.checkpoint = Checkpoint(entries=entries, metadata=metadata, version=version)
        self._parsed = True

    def get_checkpoint(self) -> Checkpoint:
        if not self._parsed:
            self.parse()
        return self.checkpoint

    def dump_info(self) -> str:
        """Return a summary of the container."""
        checkpoint = self.get_checkpoint()
        lines = [
            f"GZGD checkpoint: {self._name}",
            "=" * 50,
            f"Version: {checkpoint.version}",
            f"Kind: {checkpoint.kind or '(none)'}",
            f"Entries: {len(checkpoint.entries)}",
            f"Parameters: {sum(a.size for a in checkpoint.entries.values()):,}",
            "",
            "Entry details:",
            "-" * 50,
        ]
        for name, array in checkpoint.entries.items():
            dims = 'x'.join(str(d) for d in array.shape) or 'scalar'
            lines.append(f"  {name:<40s} {_dtype_name(array)}  {dims}")
        if checkpoint.metadata:
            lines.extend(["", "Metadata keys: " + ", ".join(sorted(checkpoint.metadata))])
        return '\n'.join(lines)


def save_checkpoint(filepath: str | Path, checkpoint: Checkpoint) -> Path:
    """Write a checkpoint file."""
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)
    with open(filepath, 'wb') as f:
        f.write(encode_checkpoint(checkpoint))
    return filepath


def load_checkpoint(filepath: str | Path) -> Checkpoint:
    """Read a checkpoint file."""
    return CheckpointParser(filepath).get_checkpoint()


def decode_checkpoint(data: bytes) -> Checkpoint:
    """Parse checkpoint bytes."""
    return CheckpointParser(data=data).get_checkpoint()
