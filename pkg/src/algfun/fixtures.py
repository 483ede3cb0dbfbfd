"""Named reference functions with their known singular counts, centers and expected results."""

from __future__ import annotations

from dataclasses import dataclass, field

from .polynomial import BivariatePoly, parse_poly


@dataclass(frozen=True)
class Fixture:
    name: str
    text: str
    center: str = "origin"  # singular index, "origin" or "infinity"
    singular_count: int | None = None
    genus: tuple[int, int] | None = None  # (K, G)
    gated: bool = True  # part of the routine test suite
    expected: dict = field(default_factory=dict)

    def poly(self) -> BivariatePoly:
        return parse_poly(self.text)


FIXTURES = {
    "tc1": Fixture(
        "tc1",
        "(z^30+z^32)+(z^14+z^20)*w^5+(z^5+z^9)*w^9+(z+z^3)*w^12+6*w^14+(2+z^2)*w^15",
        center="1", singular_count=179, genus=(200, 86),
        expected={
            "types": ["F(5,16)", "F(4,9)", "F(3,4)", "V(2,1)", "T"],
            "clsp": [27, 7, 2, 2, 118],
            "radius": [0.641328, 0.504901, 0.166817, 0.166817, 1.09352],
        },
    ),
    "tc2": Fixture(
        "tc2",
        "(1-3*z+3*z^2-1*z^3)+(-4+8*z-4*z^2)*w+(6-6*z)*w^2+(-4)*w^3+(1)*w^4",
        center="2", singular_count=2, genus=(6, 0),
        expected={"types": ["E", "E", "E", "T"], "clsp": [1, 1, 1, 1], "radius": [1.0, 1.0, 1.0, 1.0],
                  "derivative_limits": [-0.5, complex(-0.5, 0.5), complex(-0.5, -0.5)]},
    ),
    "tc3": Fixture(
        "tc3",
        "(-1043/60-5/3*z^2+2*z^3-4*z^4-6/5*z^5-2/3*z^9+8/3*z^14+25/4*z^15+4*z^16)"
        "+(11/3)*w^5+(-8/3)*w^12+(-38/5-1/2*z)*w^34",
        center="487", genus=(594, 264), gated=False,
    ),
    "tc4": Fixture(
        "tc4",
        "(-31/10+179/30*z+1/4*z^2)+(-7/4)*w^2+4*w^3+(-1/2-5/2*z)*w^8+(11/3)*w^10+(6+5/2*z)*w^14"
        "+5*w^18+(-64/15)*w^20+(11/2-1/2*z^2)*w^22+(-9/2+7/3*z)*w^25+(18/5-3/4*z^2)*w^28"
        "+(-3/2-z)*w^33+(-8/3)*w^35",
        center="infinity", singular_count=127, genus=(132, 32),
        expected={"infinity_cycles": (5, 2) + (1,) * 28},
    ),
    "tc5": Fixture(
        "tc5",
        "(2*z^6+1/2*z^7-5/4*z^11+4*z^22+29/10*z^34-z^40-13/2*z^43)"
        "+(3/5*z^10+7/4*z^24-1/4*z^50)*w^2"
        "+(2*z^17+7/2*z^34)*w^3"
        "+(-3/2*z^30+4/3*z^38+8/5*z^42)*w^4"
        "+(-6/5*z^2-1/2*z^6+7/3*z^31)*w^9"
        "+(-2/5*z^11-3/2*z^26+z^45)*w^10"
        "+(7/5*z^24-6*z^32-6*z^49)*w^14"
        "+(-3/4*z^5+7/3*z^21-1/4*z^26+4/5*z^27+4/3*z^32-2*z^36+1/3*z^39-3/4*z^41-z^43)*w^16"
        "+(-6*z^14-2*z^31-z^33)*w^18"
        "+(-2*z^27-8/3*z^50)*w^22"
        "+(4*z^8+4/5*z^25-3/2*z^27)*w^24"
        "+(-3*z^4+8/3*z^22-8/5*z^43)*w^33"
        "+(7/3*z^14-3/2*z^18)*w^34"
        "+(-4+8*z^13-7/4*z^47)*w^36"
        "+(z^2-1/4*z^7)*w^38"
        "+(-1/2*z^20-z^29+z^46)*w^40"
        "+(1/3*z^10+7/4*z^11+8/5*z^21)*w^47"
        "+(2/3*z^2+6*z^26+3/5*z^43)*w^48"
        "+(-z^9+1/4*z^13+2*z^14+2*z^18+z^36-2*z^44)*w^49"
        "+(-1/3*z^23-7/2*z^40+z^42)*w^50",
        center="origin", singular_count=4584, genus=(4634, 2268), gated=False,
    ),
    "tc6": Fixture(
        "tc6",
        "-(311/20*i+467/30)-(16/3*i+3/2)*z+(1/4-3/4*i)*z^3+(9/4*i+3)*z^4-(3/10-21/5*i)*z^5"
        "-(1-7/3*i)*z^7-5/3*z^8-(12/5*i+1)*z^9-(2*i+5/4)*z^11-(1/4-3*i)*z^12"
        "-(27/5*i+3)*z^13+(19/6*i+7)*z^14+(3*i-2)*z^15"
        "+(-(59/60*i+13/10)+(1-3*i)*z^12+(4*i+4/5)*z^13)*w"
        "+(-(71/10-1/6*i)-(8/3-6*i)*z^2+(-i-8)*z^8)*w^6"
        "+(15/2*i+116/15)*w^8"
        "+((12/5-15/4*i)+2/5*i*z^3+(-7*i-5/2)*z^10)*w^9"
        "+(13/2-32/5*i)*w^10"
        "+(-(19/4*i+5/3)-(3-6/5*i)*z^3+(3/2*i-3/4)*z^13)*w^13"
        "+((47/15*i+155/12)-(1/6-1/2*i)*z^2-(1/5-5/3*i)*z^10+(3/2*i-2)*z^14)*w^14"
        "+(-(109/12-37/12*i)-1/2*i*z^5)*w^18"
        "+((5*i+6/5)-(1/5*i+7/4)*z^12+(8/5*i+7)*z^14)*w^21"
        "+((2/5-13/10*i)-8/3*z^7+(-2*i-1)*z^10)*w^25",
        center="29", singular_count=660, genus=(700, 326), gated=False,
    ),
    "deg12": Fixture(
        "deg12",
        "w^4*z*((2/3+i/4)*(1-w^2*(2/3-i/4)^2))^4-((2/3-i/4)*((2/3+i/4)^2-w^2))^4",
        expected={"class_sizes": [4, 4, 4]},
    ),
    "iteration": Fixture(
        "iteration",
        "(z+z^2)+(1+z)*w+w^2",
    ),
}


def fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}") from None
