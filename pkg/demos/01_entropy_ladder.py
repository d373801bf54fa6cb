"""
From alphabet capacity to residual uncertainty
==============================================

The first three analysis layers, on a four-symbol toy channel: how much a
symbol COULD carry (Hartley), how much the observed usage DOES carry
(Shannon), and how much uncertainty survives once we see a noisy copy
(residual entropy of a joint distribution).
"""

from layerstack import (
    JointDistribution,
    TokenDistribution,
    hartley_entropy,
    joint_entropy,
    residual_entropy,
    shannon_entropy,
)

# Four equally-available symbols: capacity is log2(4) = 2 bits, no matter
# how the symbols end up being used.
print(f"Hartley capacity of 4 symbols: {hartley_entropy(4):.4f} bits")

# Actual usage is skewed, so the realized information rate is lower.
usage = TokenDistribution({"a": 0.5, "b": 0.25, "c": 0.125, "d": 0.125})
print(f"Shannon entropy of skewed usage: {shannon_entropy(usage):.4f} bits")

# Uniform usage is the only way to reach capacity.
print(f"Shannon entropy of uniform usage: {shannon_entropy(TokenDistribution.uniform(4)):.4f} bits")

# Now send a fair bit through a channel that flips it 25% of the time.
# The joint distribution over (sent, received) has four cells.
flip = 0.25
joint = JointDistribution(
    {
        (0, 0): 0.5 * (1 - flip),
        (0, 1): 0.5 * flip,
        (1, 0): 0.5 * flip,
        (1, 1): 0.5 * (1 - flip),
    }
)

sent = joint.marginal_transmitter()
print(f"\nJoint entropy of (sent, received):  {joint_entropy(joint):.4f} bits")
print(f"Marginal entropy of the sent bit:   {shannon_entropy(sent):.4f} bits")

# Residual entropy is what the receiver still does not know about the
# sent symbol after looking at the received one. A noiseless channel
# would leave 0 bits; total noise would leave the full 1 bit.
print(f"Residual uncertainty after receipt: {residual_entropy(joint):.4f} bits")
