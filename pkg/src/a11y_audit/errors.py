"""Execution-error type shared across the package."""


class AuditError(Exception):
    """Raised for execution failures: unreadable inputs, malformed config,
    sidecar, overlay, manifest, or snapshot files.

    The CLI maps this to exit code 2. Rule findings are never errors.
    """
