import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", parent=settings.get_profile("default"), max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = report
    elif report.when == "setup" and report.failed and "test_acceptance.py::test_criterion_" in report.nodeid:
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = report


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        report = _ACCEPTANCE[name]
        number = int(name.split("_")[2])
        title = " ".join(name.split("_")[3:])
        status = "PASS" if report.passed else "FAIL"
        line = f"criterion {number:2d} {status}  {title}"
        if report.failed:
            message = str(report.longrepr.reprcrash.message) if hasattr(report.longrepr, "reprcrash") else ""
            details = [s.strip() for s in message.split("\n")[1:] if s.strip() and not s.strip().startswith("assert")]
            if details:
                line += "  (" + "; ".join(details) + ")"
        terminalreporter.write_line(line)
