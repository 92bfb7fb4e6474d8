"""OSC 1.0 message codec.

Encodes and decodes single OSC messages (address path, typetag string,
arguments) for UDP transport. Supported argument types are int32 (``i``),
float32 (``f``) and string (``s``); every field on the wire is padded to a
4-byte boundary, integers and floats are big-endian.

Strings are carried as UTF-8 with ``surrogateescape``, so arbitrary byte
content round-trips verbatim even when it is not valid UTF-8. Bundles and
the remaining OSC argument types are rejected with typed errors rather
than guessed at.

All functions here are pure and safe to call from any thread.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

# Maximum UDP/IPv4 payload: 65535 - 8 (UDP header) - 20 (IP header).
MAX_DATAGRAM = 65_507

SUPPORTED_TAGS = frozenset("ifs")

# Characters OSC 1.0 reserves for pattern matching, plus '#' (bundle marker).
# '/' is the path separator and stays legal inside an address.
_ADDRESS_RESERVED = set(" #*,?[]{}\t\r\n")


class OscError(Exception):
    """Base class for all codec errors."""

    code = "OscError"

    def __str__(self) -> str:
        return super().__str__() or self.code


class EncodeError(OscError):
    """Argument cannot be represented on the wire."""

    code = "EncodeError"


class InvalidAddress(EncodeError):
    """Address path fails the OSC address rules for emitted messages."""

    code = "InvalidAddress"


class OversizeMessage(EncodeError):
    """Serialized message exceeds the maximum datagram size."""

    code = "OversizeMessage"


class DecodeError(OscError):
    """Base class for malformed incoming datagrams."""

    code = "DecodeError"


class Truncated(DecodeError):
    """Datagram ended before a complete field could be read."""

    code = "Truncated"


class BadPadding(DecodeError):
    """A field is not aligned to 4 bytes or has non-zero pad bytes."""

    code = "BadPadding"


class UnsupportedTag(DecodeError):
    """Typetag outside the supported set {i, f, s}."""

    code = "UnsupportedTag"


class NotAMessage(DecodeError):
    """Datagram does not begin with an OSC address."""

    code = "NotAMessage"


class BundleNotSupported(DecodeError):
    """Datagram is an OSC bundle (``#bundle``), which this server rejects."""

    code = "BundleNotSupported"


OscArg = int | float | str


@dataclass(frozen=True)
class OscMessage:
    """A decoded OSC message: address path plus ordered argument list."""

    address: str
    args: tuple[OscArg, ...] = field(default_factory=tuple)

    def typetags(self) -> str:
        return "," + "".join(_tag_for(a) for a in self.args)


def _tag_for(arg: OscArg) -> str:
    if isinstance(arg, bool):
        raise EncodeError(f"unsupported OSC argument type: {type(arg).__name__}")
    if isinstance(arg, int):
        return "i"
    if isinstance(arg, float):
        return "f"
    if isinstance(arg, str):
        return "s"
    raise EncodeError(f"unsupported OSC argument type: {type(arg).__name__}")


def _pad4(data: bytes) -> bytes:
    rem = len(data) % 4
    return data if rem == 0 else data + b"\x00" * (4 - rem)


def _encode_str(s: str) -> bytes:
    raw = s.encode("utf-8", "surrogateescape")
    if b"\x00" in raw:
        raise EncodeError("OSC strings cannot contain NUL bytes")
    return _pad4(raw + b"\x00")


def validate_address(path: str) -> None:
    """Check `path` against the rules for addresses this server emits."""
    if not path.startswith("/"):
        raise InvalidAddress(f"address must start with '/': {path!r}")
    if len(path) < 2:
        raise InvalidAddress("address must name at least one container")
    bad = _ADDRESS_RESERVED.intersection(path)
    if bad:
        raise InvalidAddress(
            f"address contains reserved character(s) {sorted(bad)!r}: {path!r}"
        )


def encode(msg: OscMessage, max_size: int = MAX_DATAGRAM) -> bytes:
    """Serialize `msg` to datagram bytes.

    Raises InvalidAddress for a bad path, EncodeError for unrepresentable
    arguments, and OversizeMessage when the result exceeds `max_size`.
    """
    validate_address(msg.address)
    parts = [_encode_str(msg.address)]
    tags = [","]
    payload: list[bytes] = []
    for arg in msg.args:
        tag = _tag_for(arg)
        tags.append(tag)
        if tag == "i":
            if not -(2**31) <= arg <= 2**31 - 1:
                raise EncodeError(f"int32 out of range: {arg}")
            payload.append(struct.pack(">i", arg))
        elif tag == "f":
            if not math.isfinite(arg):
                raise EncodeError(f"float32 must be finite: {arg}")
            payload.append(struct.pack(">f", arg))
        else:
            payload.append(_encode_str(arg))
    parts.append(_encode_str("".join(tags)))
    parts.extend(payload)
    out = b"".join(parts)
    if len(out) > max_size:
        raise OversizeMessage(
            f"serialized message is {len(out)} bytes, limit {max_size}"
        )
    return out


def _read_str(data: bytes, offset: int) -> tuple[str, int]:
    end = data.find(b"\x00", offset)
    if end < 0:
        raise Truncated("unterminated string field")
    raw = data[offset:end]
    next_off = end + 1
    rem = next_off % 4
    if rem:
        next_off += 4 - rem
    if next_off > len(data):
        raise Truncated("string padding runs past end of datagram")
    if data[end:next_off].strip(b"\x00"):
        raise BadPadding("string pad bytes must be NUL")
    return raw.decode("utf-8", "surrogateescape"), next_off


def decode(datagram: bytes) -> OscMessage:
    """Parse one datagram into an OscMessage.

    Never reads out of bounds: every failure is a typed DecodeError.
    """
    if len(datagram) < 8:
        raise Truncated(f"datagram is {len(datagram)} bytes, minimum is 8")
    if len(datagram) % 4:
        raise BadPadding(f"datagram length {len(datagram)} is not a multiple of 4")
    lead = datagram[0:1]
    if lead == b"#":
        if datagram.startswith(b"#bundle\x00"):
            raise BundleNotSupported("OSC bundles are not supported")
        raise NotAMessage("datagram starts with '#' but is not a bundle")
    if lead != b"/":
        raise NotAMessage("datagram does not start with an OSC address")

    address, offset = _read_str(datagram, 0)
    if offset >= len(datagram):
        raise Truncated("missing typetag string")
    tagstr, offset = _read_str(datagram, offset)
    if not tagstr.startswith(","):
        raise UnsupportedTag("typetag string must start with ','")
    args: list[OscArg] = []
    for tag in tagstr[1:]:
        if tag not in SUPPORTED_TAGS:
            raise UnsupportedTag(f"unsupported typetag {tag!r}")
        if tag in ("i", "f"):
            if offset + 4 > len(datagram):
                raise Truncated(f"argument {tag!r} runs past end of datagram")
            fmt = ">i" if tag == "i" else ">f"
            args.append(struct.unpack_from(fmt, datagram, offset)[0])
            offset += 4
        else:
            value, offset = _read_str(datagram, offset)
            args.append(value)
    if offset != len(datagram):
        raise BadPadding(f"{len(datagram) - offset} trailing bytes after last argument")
    return OscMessage(address, tuple(args))
