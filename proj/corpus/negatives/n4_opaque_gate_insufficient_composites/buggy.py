qc = QuantumCircuit(4)
g1 = Gate('first', 3, [])
g2 = Gate('second', 4, [])
qc.append(g1, [0, 1, 2])
qc.append(g2, [0, 1, 2, 3])
