"""URL normalization and content-address derivation."""
from __future__ import annotations

import hashlib
from urllib.parse import urlsplit

DEFAULT_PORTS = {"http": 80, "https": 443}


class MalformedUrlError(ValueError):
    pass


def normalize_url(url: str) -> str:
    """Canonical form used for deduplication: lowercase scheme and host,
    default ports stripped, path/query/fragment kept verbatim.
    """
    try:
        parts = urlsplit(url)
    except ValueError as exc:
        raise MalformedUrlError(str(exc)) from exc
    if not parts.scheme or not parts.hostname:
        raise MalformedUrlError(f"not an absolute URL: {url!r}")
    scheme = parts.scheme.lower()
    host = parts.hostname.lower()
    try:
        port = parts.port
    except ValueError as exc:
        raise MalformedUrlError(f"bad port in {url!r}") from exc
    netloc = host
    if port is not None and DEFAULT_PORTS.get(scheme) != port:
        netloc = f"{host}:{port}"
    if parts.username:
        userinfo = parts.username if parts.password is None else f"{parts.username}:{parts.password}"
        netloc = f"{userinfo}@{netloc}"
    out = f"{scheme}://{netloc}{parts.path}"
    if parts.query:
        out += f"?{parts.query}"
    if parts.fragment:
        out += f"#{parts.fragment}"
    return out


def url_id(url: str) -> str:
    """Hex SHA-256 of the normalized URL string."""
    return hashlib.sha256(normalize_url(url).encode("utf-8")).hexdigest()
