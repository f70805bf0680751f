cc 3
1 0 1
2 0 1 2
