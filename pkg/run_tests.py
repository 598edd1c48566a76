import sys
import unittest


def iter_cases(suite):
    for item in suite:
        if isinstance(item, unittest.TestSuite):
            yield from iter_cases(item)
        else:
            yield item


# The acceptance suite runs every scenario at full size; --fast leaves it out
fast = "--fast" in sys.argv[1:]

loader = unittest.TestLoader()
suite = unittest.TestSuite(
    case for case in iter_cases(loader.discover('tests'))
    if not (fast and case.id().startswith('test_acceptance'))
)
runner = unittest.TextTestRunner(verbosity=2)
result = runner.run(suite)

sys.exit(0 if result.wasSuccessful() else 1)
