from .model import (
    Block,
    ChainState,
    Transaction,
    TxKind,
    UrlRecord,
    UrlStatus,
    Verdict,
    VerifierAccount,
    Vote,
    cast_vote,
    register_user,
    submit_url,
)
from .canonical import (
    GENESIS_PARENT_HASH,
    block_from_doc,
    block_hash,
    block_to_doc,
    canonical_serialize,
    dumps_canonical,
    seal_block,
    sha256_hex,
    state_digest,
    state_from_doc,
    state_to_doc,
    tx_from_doc,
    tx_id,
    tx_to_doc,
)
from .statemachine import (
    InvalidBlockError,
    Rejection,
    apply_transaction,
    empty_state,
    fold_transactions,
    genesis_block,
    select_valid,
    validate_transaction,
)
from .urls import MalformedUrlError, normalize_url, url_id

__all__ = [
    "Block",
    "ChainState",
    "GENESIS_PARENT_HASH",
    "InvalidBlockError",
    "MalformedUrlError",
    "Rejection",
    "Transaction",
    "TxKind",
    "UrlRecord",
    "UrlStatus",
    "Verdict",
    "VerifierAccount",
    "Vote",
    "apply_transaction",
    "block_from_doc",
    "block_hash",
    "block_to_doc",
    "canonical_serialize",
    "cast_vote",
    "dumps_canonical",
    "empty_state",
    "fold_transactions",
    "genesis_block",
    "normalize_url",
    "register_user",
    "seal_block",
    "select_valid",
    "sha256_hex",
    "state_digest",
    "state_from_doc",
    "state_to_doc",
    "submit_url",
    "tx_from_doc",
    "tx_id",
    "tx_to_doc",
    "url_id",
    "validate_transaction",
]
