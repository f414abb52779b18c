import warnings

warnings.simplefilter("ignore", DeprecationWarning)
