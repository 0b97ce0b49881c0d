"""Built-in semi-IMEX schemes and the three-stage alpha family."""
import logging
import math

import numpy as np

from src.tableau.butcher_pair import ButcherPair
from src.utils.errors import CatalogError, ParameterError

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


def make_alpha_second_order(alpha, b4, a21, name=None):
    """Three-stage second-order pair satisfying the alpha condition.

    Args:
        alpha (float): Affine factor, u_{n+1} = K_3/alpha + (1 - 1/alpha) u_n.
        b4 (float): Weight of the lagged diagonal term.
        a21 (float): Implicit coupling of stage 2 to stage 1.
        name (str, optional): Identifier, generated from the parameters if omitted.

    Returns:
        ButcherPair: The assembled pair.
    """
    if alpha == 0:
        logger.error("alpha = 0 in the alpha family")
        raise ParameterError("alpha must be nonzero (the weights divide by 2*alpha)")
    explicit_a = [
        [0.0, 0.0, 0.0],
        [alpha, 0.0, 0.0],
        [(2 * alpha - 1) / 2, 0.5, 0.0],
    ]
    explicit_b = [(2 * alpha - 1) / (2 * alpha), 1 / (2 * alpha), 0.0]
    implicit_a = [
        [0.0, 0.0, 0.0],
        [a21, alpha - a21, 0.0],
        [(2 * alpha - 1) / 2, (1 - 2 * alpha * b4) / 2, alpha * b4],
    ]
    implicit_b = [(2 * alpha - 1) / (2 * alpha), (1 - 2 * alpha * b4) / (2 * alpha), 0.0, b4]
    return ButcherPair(
        name=name or f"alpha_second_order(alpha={alpha:g},b4={b4:g},a21={a21:g})",
        explicit_a=explicit_a,
        explicit_c=[0.0, alpha, alpha],
        explicit_b=explicit_b,
        implicit_a=implicit_a,
        implicit_c=[0.0, alpha, alpha],
        implicit_b=implicit_b,
        declared_order=2,
        description=f"three-stage alpha family, alpha={alpha:g}",
    )


def make_l_stable_second_order(alpha, name=None):
    """Alpha-family member with vanishing R(-inf).

    The diagonal entries are a22 = b4 and a33 = alpha * b4, equal only at
    alpha = 1. The two branches are b4 = (alpha + 1 -/+ sqrt(alpha^2 + 1)) / (2 alpha),
    a21 = alpha - b4; the first branch with both values in [0, 1] is used.

    Args:
        alpha (float): Positive alpha parameter.
        name (str, optional): Identifier.

    Returns:
        ButcherPair: The L-stable pair.
    """
    if alpha <= 0:
        logger.error(f"L-stable branch requested for alpha={alpha}")
        raise ParameterError(f"alpha must be positive, got {alpha}")
    root = math.sqrt(alpha * alpha + 1.0)
    for sign in (1.0, -1.0):
        b4 = (alpha + 1.0 - sign * root) / (2.0 * alpha)
        a21 = alpha - b4
        if 0.0 <= b4 <= 1.0 and 0.0 <= a21 <= 1.0:
            logger.debug(f"L-stable branch for alpha={alpha}: a21={a21:.17g}, b4={b4:.17g}")
            return make_alpha_second_order(alpha, b4, a21, name=name or f"l_stable_second_order(alpha={alpha:g})")
    logger.error(f"No L-stable branch in [0,1] for alpha={alpha}")
    raise ParameterError(f"no L-stable branch with a21, b4 in [0, 1] for alpha={alpha}")


def _fb_euler():
    return ButcherPair(
        name="fb_euler",
        explicit_a=[[0.0, 0.0], [1.0, 0.0]],
        explicit_c=[0.0, 1.0],
        explicit_b=[1.0, 0.0],
        implicit_a=[[0.0, 0.0], [0.0, 1.0]],
        implicit_c=[0.0, 1.0],
        implicit_b=[0.0, 0.0, 1.0],
        declared_order=1,
        description="forward-backward Euler, first order, L-stable",
        printed_stability=((1.0,), (1.0, -1.0)),
    )


def _midpoint():
    return ButcherPair(
        name="midpoint",
        explicit_a=[[0.0, 0.0], [0.5, 0.0]],
        explicit_c=[0.0, 0.5],
        explicit_b=[0.0, 1.0],
        implicit_a=[[0.0, 0.0], [0.0, 0.5]],
        implicit_c=[0.0, 0.5],
        implicit_b=[0.0, 1.0, 0.0],
        declared_order=2,
        description="midpoint, second order, A-stable",
        printed_stability=((2.0, 1.0), (2.0, -1.0)),
    )


def _trapezoid():
    pair = make_alpha_second_order(0.5, 1.0, 0.0)
    return ButcherPair(
        name="trapezoid",
        explicit_a=pair.explicit_a,
        explicit_c=pair.explicit_c,
        explicit_b=pair.explicit_b,
        implicit_a=pair.implicit_a,
        implicit_c=pair.implicit_c,
        implicit_b=pair.implicit_b,
        declared_order=2,
        description="reduced alpha=1/2 scheme, u_{n+1} = 2 K_3 - u_n, A-stable",
        printed_stability=((2.0, 1.0), (2.0, -1.0)),
    )


def _l_stable_second_order():
    pair = make_l_stable_second_order(1.0, name="l_stable_second_order")
    return ButcherPair(
        name=pair.name,
        explicit_a=pair.explicit_a,
        explicit_c=pair.explicit_c,
        explicit_b=pair.explicit_b,
        implicit_a=pair.implicit_a,
        implicit_c=pair.implicit_c,
        implicit_b=pair.implicit_b,
        declared_order=2,
        description="alpha=1 member with a21 = 1/sqrt(2), second order, L-stable",
    )


def _imex_embedded_second_order():
    gamma = 1.0 - 1.0 / SQRT2
    return ButcherPair(
        name="imex_embedded_second_order",
        explicit_a=[[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
        explicit_c=[0.0, 0.0, 1.0],
        explicit_b=[0.5, 0.0, 0.5],
        implicit_a=[
            [gamma, 0.0, 0.0],
            [1.0 - gamma, 0.0, 0.0],
            [1.0 - 2.0 * gamma, 0.0, gamma],
        ],
        implicit_c=[gamma, 1.0 - gamma, 1.0 - gamma],
        implicit_b=[0.5, 0.0, 0.5, 0.0],
        declared_order=2,
        description="classical L-stable IMEX pair recast with gamma = 1 - 1/sqrt(2)",
    )


def _third_order_4stage():
    weights = [0.2486553715043413, 0.04469938464765911, 0.3828282521031255, 0.3238169917448679]
    return ButcherPair(
        name="third_order_4stage",
        explicit_a=[
            [0.0, 0.0, 0.0, 0.0],
            [0.7775079538595848, 0.0, 0.0, 0.0],
            [0.3850382624054263, 0.2733484980719337, 0.0, 0.0],
            [0.2905474198112961, 0.1784065415104640, 0.1894327991556034, 0.0],
        ],
        explicit_c=[0.0, 0.7775079538595848, 0.6583867604773560, 0.6583867604773565],
        explicit_b=weights,
        implicit_a=[
            [0.0, 0.0, 0.0, 0.0],
            [0.5668275181562270, 0.2106804357033578, 0.0, 0.0],
            [0.3481097445529071, 0.1497169356151823, 0.1605600803092672, 0.0],
            [0.3299758037920577, 0.1113697479208660, 0.1255619659848192, 0.09147924277961349],
        ],
        implicit_c=[0.0, 0.7775079538595848, 0.6583867604773565, 0.6583867604773565],
        implicit_b=weights + [0.0],
        declared_order=3,
        description="four-stage third order, R(-inf) = 0, three solves per step",
        printed_stability=((323.1586, 173.6267, 33.95359), (323.1586, -149.5318, 21.90616, -1.0)),
    )


def _five_stage(name, explicit_a, explicit_c, implicit_a, implicit_c, description, printed):
    # Update rows repeat the last stage row, so u_{n+1} = K_s.
    explicit_a = np.array(explicit_a, dtype=float)
    implicit_a = np.array(implicit_a, dtype=float)
    implicit_b = np.concatenate([implicit_a[-1, :-1], [0.0, implicit_a[-1, -1]]])
    return ButcherPair(
        name=name,
        explicit_a=explicit_a,
        explicit_c=explicit_c,
        explicit_b=explicit_a[-1].copy(),
        implicit_a=implicit_a,
        implicit_c=implicit_c,
        implicit_b=implicit_b,
        declared_order=3,
        description=description,
        printed_stability=printed,
    )


def _third_order_5stage_v1():
    return _five_stage(
        "third_order_5stage_v1",
        explicit_a=[
            [0.0, 0.0, 0.0, 0.0, 0.0],
            [0.6411692131552690, 0.0, 0.0, 0.0, 0.0],
            [0.3905895060040396, 0.8631427692385082, 0.0, 0.0, 0.0],
            [0.4274711580740817, 0.3555517808854274, 0.21697706104049089, 0.0, 0.0],
            [0.3099153072147496, 0.3259623915325679, -0.2881752086128284, 0.6522975098655108, 0.0],
        ],
        explicit_c=[0.0, 0.6411692131552690, 1.2537322752425418, 1.0, 1.0],
        implicit_a=[
            [0.0, 0.0, 0.0, 0.0, 0.0],
            [0.3031200089371227, 0.3380492042181466, 0.0, 0.0, 0.0],
            [0.3905895060040396, 0.4629099915955034, 0.4002327776430044, 0.0, 0.0],
            [0.4341539203752613, 0.3418741772176282, 0.2239719024071105, 0.0, 0.0],
            [0.3099153072147496, 0.3259623915325679, -0.2881752086128284, 0.0, 0.6522975098655108],
        ],
        implicit_c=[0.0, 0.641169213155269, 1.253732275242547, 1.0, 1.0],
        description="five-stage third order, L-stable, three solves per step",
        printed=((11.3308, -4.42559, -3.10127), (11.3308, -15.7564, 6.98974, -1.0)),
    )


def _third_order_5stage_v2():
    return _five_stage(
        "third_order_5stage_v2",
        explicit_a=[
            [0.0, 0.0, 0.0, 0.0, 0.0],
            [0.3772977846271119, 0.0, 0.0, 0.0, 0.0],
            [0.3210924473454751, 0.6789075526545275, 0.0, 0.0, 0.0],
            [0.2958359189953578, 0.3278679213986500, 0.3762961596059923, 0.0, 0.0],
            [0.05826227065874467, 0.7093884017687849, -0.2070619980550040, 0.4394113256274744, 0.0],
        ],
        explicit_c=[0.0, 0.3772977846271119, 1.0, 1.0, 1.0],
        implicit_a=[
            [0.0, 0.0, 0.0, 0.0, 0.0],
            [0.2709023139105694, 0.1063954707165423, 0.0, 0.0, 0.0],
            [0.3210924473454735, 0.4580508073137827, 0.2208567453407465, 0.0, 0.0],
            [0.4458748098646118, 0.08691986121002987, 0.3372847407465245, 0.1299205881788340, 0.0],
            [0.05826227065874504, 0.7093884017687844, -0.2070619980550035, -0.2178085843289785, 0.6572199099564526],
        ],
        implicit_c=[0.0, 0.3772977846271117, 1.0, 1.0, 1.0],
        description="five-stage third order, R(-inf) = 0, four solves per step",
        printed=((498.399, -57.0133, -123.561, -35.1326), (498.399, -555.413, 182.652, -23.1453, 1.0)),
    )


BUILTIN_SCHEMES = {
    "fb_euler": _fb_euler,
    "midpoint": _midpoint,
    "trapezoid": _trapezoid,
    "l_stable_second_order": _l_stable_second_order,
    "imex_embedded_second_order": _imex_embedded_second_order,
    "third_order_4stage": _third_order_4stage,
    "third_order_5stage_v1": _third_order_5stage_v1,
    "third_order_5stage_v2": _third_order_5stage_v2,
}


def catalog_names():
    """List the built-in scheme identifiers in catalog order."""
    return list(BUILTIN_SCHEMES)


def make_builtin(name):
    """Construct a built-in scheme.

    Args:
        name (str): One of catalog_names().

    Returns:
        ButcherPair: The scheme.
    """
    builder = BUILTIN_SCHEMES.get(name)
    if builder is None:
        logger.error(f"Unknown scheme '{name}'")
        raise CatalogError(f"unknown scheme '{name}'; valid names: {', '.join(BUILTIN_SCHEMES)}")
    return builder()
