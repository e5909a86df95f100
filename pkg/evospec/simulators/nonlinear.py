import numpy as np


def markov_chain(P, size, rng, initial=0):
    """

    Path of a two-state Markov chain.

    Args:
        P (ndarray): 2 x 2 transition matrix, rows sum to one
        size (int): path length
        rng (Generator): random generator
        initial (int): state before the first step

    Returns:
        int array of states in {0, 1}

    """

    P = np.asarray(P, dtype=float)
    draws = rng.random(size)

    states = np.empty(size, dtype=int)
    s = initial

    for t in range(size):
        # move to state 1 with probability P[s, 1]
        s = int(draws[t] < P[s, 1])
        states[t] = s

    return states


class Simulators:
    """

    Nonlinear model recursions.

    """

    @staticmethod
    def tv_arch1(spec, u, rng):
        """

        X_i = e_i sqrt(a0(u_i) + a1(u_i) X_{i-1}^2)

        """

        a0 = spec.coefficients["a0"](u)
        a1 = spec.coefficients["a1"](u)
        e = rng.standard_normal(len(u))

        x = np.empty(len(u))
        prev = 0.0

        for t in range(len(u)):
            prev = e[t] * np.sqrt(a0[t] + a1[t] * prev * prev)
            x[t] = prev

        return x

    @staticmethod
    def tv_markov_switch(spec, u, rng):
        """

        X_i = a0(u_i) + a1(u_i) S_i + b(u_i) X_{i-1} + e_i, with S a
        two-state Markov chain.

        """

        a0 = spec.coefficients["a0"](u)
        a1 = spec.coefficients["a1"](u)
        b = spec.coefficients["b"](u)

        states = markov_chain(spec.transition, len(u), rng)
        e = rng.standard_normal(len(u))

        x = np.empty(len(u))
        prev = 0.0

        for t in range(len(u)):
            prev = a0[t] + a1[t] * states[t] + b[t] * prev + e[t]
            x[t] = prev

        return x

    @staticmethod
    def tv_threshold_ar(spec, u, rng):
        """

        X_i = a(u_i) max(0, X_{i-1}) + b(u_i) max(0, -X_{i-1}) + e_i

        """

        a = spec.coefficients["a"](u)
        b = spec.coefficients["b"](u)
        e = rng.standard_normal(len(u))

        x = np.empty(len(u))
        prev = 0.0

        for t in range(len(u)):
            prev = a[t] * max(0.0, prev) + b[t] * max(0.0, -prev) + e[t]
            x[t] = prev

        return x

    @staticmethod
    def tv_bilinear(spec, u, rng):
        """

        X_i = b(u_i) X_{i-1} + e_i + c(u_i) X_{i-1} e_{i-1}

        """

        b = spec.coefficients["b"](u)
        c = spec.coefficients["c"](u)
        e = rng.standard_normal(len(u) + 1)

        x = np.empty(len(u))
        prev = 0.0

        for t in range(len(u)):
            prev = b[t] * prev + e[t + 1] + c[t] * prev * e[t]
            x[t] = prev

        return x
