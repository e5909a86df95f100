import numpy as np


class Simulators:
    """

    Linear model recursions.

    Each method takes the model, the rescaled time of every step
    (burn-in included) and a random generator, and returns the
    whole path.

    """

    @staticmethod
    def tv_ar1(spec, u, rng):
        """

        X_i = a(u_i) X_{i-1} + e_i

        """

        a = spec.coefficients["a"](u)
        e = rng.standard_normal(len(u))

        x = np.empty(len(u))
        prev = 0.0

        for t in range(len(u)):
            prev = a[t] * prev + e[t]
            x[t] = prev

        return x

    @staticmethod
    def tv_ma1(spec, u, rng):
        """

        X_i = a0(u_i) e_i + a1(u_i) e_{i-1}

        """

        e = rng.standard_normal(len(u) + 1)

        return spec.coefficients["a0"](u) * e[1:] + spec.coefficients["a1"](u) * e[:-1]

    @staticmethod
    def tv_ar_general(spec, u, rng):
        """

        sum_{j=0}^p a_j(u_i) X_{i-j} = sigma(u_i) e_i with a_0 = 1

        """

        a = spec.ar_polynomial(u)
        p = a.shape[1]
        sigma = spec.coefficients["sigma"](u)
        e = rng.standard_normal(len(u))

        # leading p zeros hold the initial values
        x = np.zeros(len(u) + p)

        for t in range(len(u)):
            past = x[t : t + p][::-1]
            x[t + p] = sigma[t] * e[t] - np.dot(a[t], past)

        return x[p:]
