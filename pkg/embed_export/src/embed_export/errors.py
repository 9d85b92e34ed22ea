class JobError(Exception):
    """Any failure that aborts an export job; message says where and why."""
