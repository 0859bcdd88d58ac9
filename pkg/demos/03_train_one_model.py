"""
Training one hybrid model on Iris
=================================

pre dense -> tanh -> circuit -> <Z> readout -> post dense -> softmax,
trained end to end with Adam.
"""

from hqnas import hqnn
from hqnas.data import load_iris, standardize, stratified_split
from hqnas.genotype import from_token
from hqnas.hqnn import TrainConfig

ds = load_iris()
split = stratified_split(ds, test_fraction=0.2, seed=0)
xtr, xte = standardize(ds, split)
ytr, yte = ds.labels[split.train], ds.labels[split.test]

g = from_token("q4-ang-RyRyRxRx-cnot-lin-d2")
model = hqnn.build(g, ds.num_features, ds.num_classes, seed=42)
print(g.token(), "has", model.num_params, "trainable parameters")

curve = hqnn.train(model, xtr, ytr, TrainConfig(epochs=30, seed=42))
for epoch in (0, 9, 19, 29):
    print(f"epoch {epoch + 1:2d}  loss {curve[epoch]:.4f}")
print("test accuracy:", hqnn.accuracy(model, xte, yte))
