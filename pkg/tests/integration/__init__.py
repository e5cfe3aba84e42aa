import platform
import signal
import subprocess
import time
from pathlib import Path

PROJECT_ROOT = Path(__file__).parent.parent.parent

# CI environments may be slower, so use generous timeout
CI_TIMEOUT = 120  # 2 minutes for solver and codec runs


def run_semicon_with_timeout(args, **kwargs):
    """Run semicon command with consistent timeout handling for CI environments."""
    if args[0] != "semicon":
        args = ["semicon"] + list(args)

    # Set default timeout if not provided
    if 'timeout' not in kwargs:
        kwargs['timeout'] = CI_TIMEOUT

    # Set default capture settings if not provided
    if 'capture_output' not in kwargs:
        kwargs['capture_output'] = True
    if 'text' not in kwargs and not isinstance(kwargs.get('input'), bytes):
        kwargs['text'] = True

    return subprocess.run(args, **kwargs)


def metadata_value(txt_output: str, key: str) -> str:
    """Value of a "key: value" line of TXT output."""
    for line in txt_output.splitlines():
        if line.startswith(f"{key}: "):
            return line[len(key) + 2:]
    raise AssertionError(f"no {key!r} line in output:\n{txt_output}")


def csv_rows(csv_output: str):
    return [line.split(",") for line in csv_output.strip().splitlines()]


def is_process_terminated_by_signal(returncode, expected_signal):
    """
    Check if a process was terminated by the expected signal across platforms.

    Args:
        returncode: Process return code from subprocess
        expected_signal: Expected signal number (e.g., signal.SIGINT, signal.SIGTERM)

    Returns:
        bool: True if process was terminated by the expected signal
    """
    if returncode is None:
        return False

    # Unix/Linux standard: 128 + signal_number
    if returncode == 128 + expected_signal:
        return True

    # Killed before the handler was installed: negative signal number
    if returncode == -expected_signal:
        return True

    if platform.system() == "Windows":
        if expected_signal == signal.SIGINT:
            return returncode in [-1073741510, 1, 130, -2]
        elif expected_signal == signal.SIGTERM:
            return returncode in [1, 143, -15, -1]

    return False


def run_semicon_with_signal(command, signal_to_send, delay=1.5, timeout=30.0):
    """
    Start a semicon command, send it a signal after `delay` seconds and collect the result.

    Returns:
        subprocess.CompletedProcess with result
    """
    process = subprocess.Popen(
        command,
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
        cwd=str(PROJECT_ROOT)
    )

    time.sleep(delay)
    try:
        process.send_signal(signal_to_send)
    except ProcessLookupError:
        # Process may have already finished
        pass

    try:
        stdout, stderr = process.communicate(timeout=timeout)
    except subprocess.TimeoutExpired:
        process.kill()
        stdout, stderr = process.communicate()

    return subprocess.CompletedProcess(command, process.returncode, stdout, stderr)
