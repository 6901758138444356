"""Independent reference evaluation of the slider-crank formulas.

Written directly from the closed forms with plain numpy so that the C++
implementation can be checked against values that do not share its code path.
Run it to regenerate the constants frozen in tests/unit/test_models.cpp and
tests/unit/test_steppers.cpp.
"""
import numpy as np

l1, l2, a, b, c = 0.153, 0.306, 0.05, 0.025, 0.001
m1, m2, m3 = 0.038, 0.038, 0.076
J1, J2, J3 = 7.4e-5, 5.9e-4, 2.7e-6
grav = 9.81
d = 2 * b + c


def mass(q):
    t1, t2, _ = q
    k = l1 * l2 * np.cos(t1 - t2) * (m2 / 2 + m3)
    return np.array([[J1 + l1**2 * (m1 / 4 + m2 + m3), k, 0.0],
                     [k, J2 + l2**2 * (m2 / 4 + m3), 0.0],
                     [0.0, 0.0, J3]])


def forces(q, v):
    t1, t2, _ = q
    w1, w2, _ = v
    k = l1 * l2 * np.sin(t1 - t2) * (m2 / 2 + m3)
    return np.array([-k * w2**2 - grav * l1 * np.cos(t1) * (m1 / 2 + m2 + m3),
                     k * w1**2 - grav * l2 * np.cos(t2) * (m2 / 2 + m3),
                     0.0])


def gaps(q):
    t1, t2, t3 = q
    y = l1 * np.sin(t1) + l2 * np.sin(t2)
    s, co = np.sin(t3), np.cos(t3)
    return np.array([d / 2 - y + a * s - b * co,
                     d / 2 - y - a * s - b * co,
                     d / 2 + y - a * s - b * co,
                     d / 2 + y + a * s - b * co])


def gap_jacobian(q, h=1e-6):
    cols = []
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        cols.append((gaps(q + e) - gaps(q - e)) / (2 * h))
    return np.array(cols).T


def energy(q, v):
    t1, t2, _ = q
    pot = grav * (m1 * l1 / 2 * np.sin(t1) + m2 * (l1 * np.sin(t1) + l2 / 2 * np.sin(t2))
                  + m3 * (l1 * np.sin(t1) + l2 * np.sin(t2)))
    return 0.5 * v @ mass(q) @ v + pot


q0 = np.zeros(3)
v0 = np.array([150.0, -75.0, 0.0])

print("M11(0)        = %.17g" % mass(q0)[0, 0])
print("E0            = %.17g" % energy(q0, v0))
qs, vs = np.array([0.1, 0.05, 0.0]), np.array([10.0, 5.0, 0.0])
print("h(q,v)        = %s" % ", ".join("%.17g" % x for x in forces(qs, vs)))
print("gdot(q0,v0)   = %s" % ", ".join("%.17g" % x for x in gap_jacobian(q0) @ v0))

# one contact-free Moreau step (midpoint predictor, explicit M, h)
dt = 1e-5
qm = q0 + dt / 2 * v0
print("g(q_M)        = %s" % ", ".join("%.17g" % x for x in gaps(qm)))
v1 = v0 + np.linalg.solve(mass(qm), forces(qm, v0) * dt)
q1 = q0 + (v0 + v1) * dt / 2
print("moreau v1     = %s" % ", ".join("%.17g" % x for x in v1))
print("moreau q1     = %s" % ", ".join("%.17g" % x for x in q1))
