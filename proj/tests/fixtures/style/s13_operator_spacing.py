i=i+1
i =i+1
i= i+1
submitted +=1
x=1; y=2
print(x , end='')
c = (a +b)*(a - b)
c = (a+ b)*(a - b)
z = x **y
z = (x + 1) ** 2
z = -x
z = +x
z = ~x
z = not x
n = n*-1
n = n * -1
q = 3.14*r**2
