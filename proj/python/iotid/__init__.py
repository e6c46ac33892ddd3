# Copyright 2026 The iotid Authors
# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the iotid identity ledger.

Command results are plain dicts with the same keys as the CLI's
``--machine`` output. Failures raise :class:`IotidError`, whose ``code``
attribute holds the error name (for example ``"DuplicateAsset"``) and whose
``subject`` names the object involved.
"""

from ._core import (
    Client,
    IotidError,
    content_hash,
    derive_address,
    format_did,
    parse_did,
    public_key,
    run_scenario,
    sign,
    sim_run,
    verify,
)

__all__ = [
    "Client",
    "IotidError",
    "content_hash",
    "derive_address",
    "format_did",
    "parse_did",
    "public_key",
    "run_scenario",
    "sign",
    "sim_run",
    "verify",
]
