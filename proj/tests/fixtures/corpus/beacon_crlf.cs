using System.Collections.Generic;

namespace Beacons
{
    public class Ledger
    {
        private const int Limit = 20;
        private readonly Dictionary<string, int> counts = new Dictionary<string, int>();

        public void Add(string name, int count)
        {
            if (counts.ContainsKey(name))
            {
                counts[name] += count;
            }
            else
            {
                counts[name] = count;
            }
        }

        public int Total()
        {
            int sum = 0;
            foreach (var pair in counts)
            {
                sum += pair.Value;
            }
            return sum;
        }

        public List<string> Heavy()
        {
            var names = new List<string>();
            foreach (var pair in counts)
            {
                if (pair.Value >= Limit)
                {
                    names.Add(pair.Key);
                }
            }
            return names;
        }
    }
}
