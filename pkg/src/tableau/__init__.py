from .butcher_pair import ButcherPair
from .catalog import catalog_names, make_builtin, make_alpha_second_order, make_l_stable_second_order
