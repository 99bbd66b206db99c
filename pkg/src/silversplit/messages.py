"""
silversplit.messages contains functions to display status, error, or warning
messages to the user. Warning and error messages are also associated
with a "message class", which is a string that verification reports use to
group findings.

Error classes are:
'usage' - there was something funny about the command-line parameters
'domain' - an argument lies outside the domain of an operation
'convergence' - a solver, quadrature or truncation did not converge
'bifurcation' - critical points merged, vanished or multiplied
'check' - a verification check failed
'other' - catchall.

Warning classes are:
'usage' - there was something funny about the command-line parameters
'phases' - the phase condition on primary harmonics is violated
'precision' - a computation was re-run at extended precision
'other' - catchall.
"""

__all__ = ["error_message", "warning_message", "status_message", "debug_message", "set_verbosity"]

import logging

log = logging.getLogger("silversplit")
ch = logging.StreamHandler()  # stderr, so data on stdout stays clean
logging_fmt_str = "%(levelname)s: %(message)s"
formatter = logging.Formatter(logging_fmt_str)
ch.setFormatter(formatter)
log.addHandler(ch)
log.setLevel(logging.INFO)


def set_verbosity(quiet=False, debug=False):
    if debug:
        log.setLevel(logging.DEBUG)
    elif quiet:
        log.setLevel(logging.WARNING)
    else:
        log.setLevel(logging.INFO)

def error_message(msg, cls=None):
    log.error("%s", msg)

def warning_message(msg, cls=None):
    log.warning("%s", msg)

def status_message(msg):
    log.info("%s", msg)

def debug_message(msg):
    log.debug("%s", msg)
