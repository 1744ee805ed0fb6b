# (number, title, passed, seconds, limit) filled in by the acceptance suite
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, secs, limit in sorted(ACCEPTANCE):
        terminalreporter.write_line(
            f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title} ({secs:.1f} s, limit {limit} s)")
