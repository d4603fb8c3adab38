"""Learner de-identification: keyed pseudonyms, PII scrubbing, identity vault.

No module downstream of ingestion ever sees a raw identity. Pseudonyms
are keyed one-way digests, so re-ingesting the same logs with the same
key reproduces the same tokens without any stateful lookup. Reversal is
opt-in via :class:`IdentityVault`, which must live outside the analytics
store directory.
"""

from __future__ import annotations

import hmac
import hashlib
import os
from pathlib import Path

from .events import Event, Pseudonym

TOKEN_LENGTH = 16

#: Payload keys that are dropped before an event may be stored.
PII_KEYS = frozenset({"email", "name", "ip", "photo"})

_HEX = frozenset("0123456789abcdef")


def pseudonymize(raw_id: str, key: str) -> Pseudonym:
    """Derive the stable pseudonym for one raw identity.

    HMAC-SHA256 under the deployment key, truncated to a fixed-length
    lowercase hex token. Same (raw_id, key) always yields the same
    token; different keys yield unrelated tokens.
    """
    if not key:
        raise ValueError("pseudonymization key must be non-empty")
    digest = hmac.new(key.encode(), raw_id.encode(), hashlib.sha256).hexdigest()
    return Pseudonym(digest[:TOKEN_LENGTH])


def is_token(value: str) -> bool:
    """True if ``value`` has the shape of an already-issued pseudonym.

    Used by ingestion to pass previously tidied output through without
    double hashing. Raw platform identities (usernames, emails, numeric
    ids) never match this shape.
    """
    return len(value) == TOKEN_LENGTH and all(c in _HEX for c in value)


def scrub(event: Event) -> Event:
    """Drop denylisted PII payload keys; everything else is unchanged."""
    kept = tuple(item for item in event.payload if item[0] not in PII_KEYS)
    if len(kept) == len(event.payload):
        return event
    return Event(event.ts, event.learner, event.course, event.verb, event.object, kept)


class IdentityVault:
    """Optional reversible pseudonym -> raw identity table.

    Disabled unless a path is given explicitly. The file is two-column
    tab-separated, readable by its owner only, and refuses to live
    inside the analytics store directory.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)

    @staticmethod
    def ensure_outside(vault_path: str | Path, store_root: str | Path) -> None:
        vault = Path(vault_path).resolve()
        store = Path(store_root).resolve()
        if store == vault or store in vault.parents:
            raise ValueError("identity vault may not live inside the analytics store")

    def record(self, mapping: dict[Pseudonym, str]) -> None:
        """Merge new pseudonym->raw pairs into the vault file."""
        existing = self.load()
        existing.update(mapping)
        fd = os.open(self.path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            for token in sorted(existing):
                fh.write(f"{token}\t{existing[token]}\n")

    def load(self) -> dict[Pseudonym, str]:
        if not self.path.exists():
            return {}
        mapping: dict[Pseudonym, str] = {}
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                token, _, raw = line.partition("\t")
                mapping[Pseudonym(token)] = raw
        return mapping
