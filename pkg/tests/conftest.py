import sys

from hypothesis import HealthCheck, settings

import tatecoh
from helpers import recording

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def _install_recorders():
    # rebind every module-level reference so library-internal calls are logged too
    from tatecoh import cohomology
    for name in ("tate", "cyclic_tate_oracle"):
        original = getattr(cohomology, name)
        wrapped = recording(original)
        for modname, mod in list(sys.modules.items()):
            if (modname == "tatecoh" or modname.startswith("tatecoh.")) and \
                    getattr(mod, name, None) is original:
                setattr(mod, name, wrapped)


_install_recorders()
assert tatecoh.tate.recorded


def pytest_collection_modifyitems(session, config, items):
    # acceptance criteria read the log filled by the other suites, so they go last
    items.sort(key=lambda item: item.path.name == "test_acceptance.py")


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    lines = getattr(acc, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
