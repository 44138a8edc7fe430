"""Array files: whitespace-separated integers, or a small binary format.

Binary layout: ``b"SNLA"``, version (u16), reserved (u16), count (u64),
then ``count`` signed 64-bit little-endian values.
"""

import struct

import numpy as np

MAGIC = b"SNLA"
VERSION = 1
_HEAD = struct.Struct("<4sHHQ")
_I64 = (-(1 << 63), (1 << 63) - 1)


def parse_text(text):
    vals = []
    for tok in text.split():
        try:
            v = int(tok)
        except ValueError:
            raise ValueError(f"not an integer: {tok[:40]!r}") from None
        if not _I64[0] <= v <= _I64[1]:
            raise ValueError(f"value {v} does not fit in 64 bits")
        vals.append(v)
    if not vals:
        raise ValueError("array file holds no values")
    return np.array(vals, dtype=np.int64)


def parse_binary(data):
    if len(data) < _HEAD.size:
        raise ValueError("truncated binary array header")
    magic, version, _, count = _HEAD.unpack_from(data)
    if magic != MAGIC:
        raise ValueError("bad binary array magic")
    if version != VERSION:
        raise ValueError(f"unsupported binary array version {version}")
    if count < 1:
        raise ValueError("array file holds no values")
    if len(data) != _HEAD.size + 8 * count:
        raise ValueError("binary array length does not match its count")
    return np.frombuffer(data, dtype="<i8", offset=_HEAD.size).astype(np.int64)


def read_array(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] == MAGIC:
        return parse_binary(data)
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        raise ValueError("array file is neither text nor binary") from None
    return parse_text(text)


def write_array(path, values, binary=False):
    vals = np.asarray(values, dtype=np.int64).reshape(-1)
    if binary:
        data = _HEAD.pack(MAGIC, VERSION, 0, vals.size) + vals.astype("<i8").tobytes()
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        with open(path, "w") as fh:
            fh.write("\n".join(str(int(v)) for v in vals) + "\n")
