import logging
import warnings


class SuppressWarningsMixin:
    def setUp(self):
        # sympy and mpmath deprecations
        warnings.simplefilter("ignore", DeprecationWarning)
        warnings.simplefilter("ignore", UserWarning)
        # JSON progress events
        logging.getLogger("cmtaylor").setLevel(logging.WARNING)
