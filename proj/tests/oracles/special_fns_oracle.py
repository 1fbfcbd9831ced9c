"""Reference values for the special-function unit tests (mpmath, 50 digits)."""
import mpmath as mp

mp.mp.dps = 50


def show(name, v):
    v = mp.mpc(v)
    print(f"{name}: {mp.nstr(v.real, 17)} {mp.nstr(v.imag, 17)}")


show("gamma(1+i)", mp.gamma(1 + 1j))
show("gamma(-2.5+0.5i)", mp.gamma(mp.mpc(-2.5, 0.5)))
show("gamma(20.3-7i)", mp.gamma(mp.mpc(20.3, -7)))
show("digamma(1+i)", mp.digamma(1 + 1j))
show("digamma(-1.5+0.2i)", mp.digamma(mp.mpc(-1.5, 0.2)))
show("U(1,1,1)", mp.hyperu(1, 1, 1))
show("U(0.5+i,1.5-0.3i,3+2i)", mp.hyperu(mp.mpc(0.5, 1), mp.mpc(1.5, -0.3), mp.mpc(3, 2)))
show("U(1-i,0.3,40i)", mp.hyperu(mp.mpc(1, -1), 0.3, mp.mpc(0, 40)))
show("U(1+i,3,2i)", mp.hyperu(mp.mpc(1, 1), 3, mp.mpc(0, 2)))
show("U(1+i,-1,2i)", mp.hyperu(mp.mpc(1, 1), -1, mp.mpc(0, 2)))
show("U(-i,-2-i,-5i)", mp.hyperu(mp.mpc(0, -1), mp.mpc(-2, -1), mp.mpc(0, -5)))
show("M(1+i,2.5,-40i)", mp.hyp1f1(mp.mpc(1, 1), 2.5, mp.mpc(0, -40)))
show("M(0.5-2i,3+i,25)", mp.hyp1f1(mp.mpc(0.5, -2), mp.mpc(3, 1), 25))
show("lower_gamma(0.5+0.5i,2i)", mp.gammainc(mp.mpc(0.5, 0.5), 0, mp.mpc(0, 2)))
show("j_10(2.5)", mp.sqrt(mp.pi / 5) * mp.besselj(10.5, 2.5))
show("j_5(1+2i)", mp.sqrt(mp.pi / (2 * mp.mpc(1, 2))) * mp.besselj(5.5, mp.mpc(1, 2)))
show("j_3(30)", mp.sqrt(mp.pi / 60) * mp.besselj(3.5, 30))
