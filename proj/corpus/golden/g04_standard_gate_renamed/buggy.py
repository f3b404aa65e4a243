a = QuantumCircuit(2)
a.sdg(1)
...
