"""Reference values shared by several test modules."""

from fractions import Fraction

H43 = ([32, 30, 1], [10, 42, 1], [28, 18, 1])
SURVIVORS43 = {(3, 24, 36), (4, 29, 28), (29, 24, 13), (20, 21, 29), (20, 23, 19), (36, 21, 6)}
MAXIMAL43 = {(36, 21, 6), (20, 23, 19)}

# rational Igusa class polynomials of Q(i sqrt(13 - 3 sqrt 13)) from the
# complex-analytic computation (van Wamelen), lowest degree first
VAN_WAMELEN = (
    [
        Fraction(
            17211893103548805144815938862454140808252633213039291208686119112918076788941674683411636004,
            58670687646017062528338814934164161420328368922180746779053222569,
        ),
        -Fraction(
            9625430292534239443768093859336546624656066801331680515511924,
            1224160503138337270992732796402545210705949947,
        ),
        Fraction(1),
    ],
    [
        Fraction(
            101869481833026643236326057638275086345512388711354393815337676100,
            387742378329008606934824201506984053723129,
        ),
        -Fraction(3237631624959669936998571242515324335027260, 7973132502458523379282597629),
        Fraction(1),
    ],
    [
        Fraction(
            83671593583457548222292142563905819629154823011540406083420061764,
            3489681404961077462413417813562856483508161,
        ),
        -Fraction(2511631949170772694805531862232571975071932, 23919397507375570137847792887),
        Fraction(1),
    ],
)
