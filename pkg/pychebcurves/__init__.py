import logging

from pychebcurves import routines
from pychebcurves import config
from pychebcurves import ff
from pychebcurves import poly
from pychebcurves import chebyshev
from pychebcurves import moebius
from pychebcurves import plane_curve
from pychebcurves import autgroup
from pychebcurves._version import __version__

logging.getLogger("pychebcurves").setLevel(logging.WARNING)
